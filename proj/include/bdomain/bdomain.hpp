#pragma once

// Umbrella header: the whole pipeline from meshes to verdicts.

#include "bdomain/annotate.hpp"
#include "bdomain/classify.hpp"
#include "bdomain/diagram.hpp"
#include "bdomain/generators.hpp"
#include "bdomain/implicit.hpp"
#include "bdomain/mesh.hpp"
#include "bdomain/morse.hpp"
#include "bdomain/reeb.hpp"
#include "bdomain/rewrite.hpp"
#include "bdomain/slice.hpp"
#include "bdomain/vec3.hpp"
#include "bdomain/visibility.hpp"
#include "bdomain/wirg.hpp"
