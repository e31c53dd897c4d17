#pragma once

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bdomain/errors.hpp"

namespace bdomain {

// Braid-like diagrams of spatial trivalent graphs, read bottom to top.
// Strands are graph edges monotone in height:
//   cup        a strand opens (appended at the right; cupN inserts at N)
//   cap        the last strand closes (bare cap requires exactly one strand;
//              capN closes strand N at any time)
//   YN         strand N splits into N, N+1
//   LN         strands N, N+1 merge
//   sN / sN-   positive / negative crossing of strands N, N+1

enum class TokKind { Cup, Cap, Split, Merge, Cross, CrossInv };

struct DiagramToken {
  TokKind kind;
  int pos = 0;  // 1-based strand position; 0 = bare cup/cap
};

struct DiagramWord {
  std::vector<DiagramToken> tokens;
  std::vector<int> profile;  // strand count after each token; profile[0] = 0

  int crossings() const {
    int c = 0;
    for (const auto& t : tokens) c += t.kind == TokKind::Cross || t.kind == TokKind::CrossInv;
    return c;
  }
  int max_strands() const {
    int m = 0;
    for (int p : profile) m = std::max(m, p);
    return m;
  }
};

inline std::string render(const DiagramWord& w) {
  std::string out;
  for (const auto& t : w.tokens) {
    if (!out.empty()) out += " ";
    switch (t.kind) {
      case TokKind::Cup: out += t.pos == 0 ? "cup" : "cup" + std::to_string(t.pos); break;
      case TokKind::Cap: out += t.pos == 0 ? "cap" : "cap" + std::to_string(t.pos); break;
      case TokKind::Split: out += "Y" + std::to_string(t.pos); break;
      case TokKind::Merge: out += "L" + std::to_string(t.pos); break;
      case TokKind::Cross: out += "s" + std::to_string(t.pos); break;
      case TokKind::CrossInv: out += "s" + std::to_string(t.pos) + "-"; break;
    }
  }
  return out;
}

/// Recomputes the strand-count profile, reporting the first violation.
inline void validate_word(DiagramWord& w) {
  w.profile.assign(1, 0);
  int count = 0;
  for (size_t i = 0; i < w.tokens.size(); ++i) {
    const auto& t = w.tokens[i];
    auto fail = [&](const std::string& what) {
      throw StrandCountError(what + " at token " + std::to_string(i) + " with " +
                             std::to_string(count) + " strands");
    };
    switch (t.kind) {
      case TokKind::Cup:
        if (t.pos != 0 && (t.pos < 1 || t.pos > count + 1)) fail("cup position out of range");
        ++count;
        break;
      case TokKind::Cap:
        if (t.pos == 0) {
          if (count != 1) throw StrandCountError("cap at " + std::to_string(count) + " strands (token " +
                                                 std::to_string(i) + ")");
        } else if (t.pos < 1 || t.pos > count) {
          fail("cap position out of range");
        }
        --count;
        break;
      case TokKind::Split:
        if (t.pos < 1 || t.pos > count) fail("split position out of range");
        ++count;
        break;
      case TokKind::Merge:
        if (t.pos < 1 || t.pos + 1 > count) fail("merge position out of range");
        --count;
        break;
      case TokKind::Cross:
      case TokKind::CrossInv:
        if (t.pos < 1 || t.pos + 1 > count) fail("crossing position out of range");
        break;
    }
    if (count < 0) fail("strand count went negative");
    w.profile.push_back(count);
  }
  if (count != 0)
    throw StrandCountError("diagram is not closed: " + std::to_string(count) +
                           " strands remain at the end");
}

inline DiagramWord parse_diagram(const std::string& text) {
  DiagramWord w;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    DiagramToken t;
    auto read_pos = [&](size_t off, bool allow_empty) -> int {
      if (off >= tok.size()) {
        if (allow_empty) return 0;
        throw LexError("token '" + tok + "' is missing a position");
      }
      size_t end = off;
      while (end < tok.size() && std::isdigit(static_cast<unsigned char>(tok[end]))) ++end;
      if (end == off) throw LexError("token '" + tok + "' is missing a position");
      int pos = std::stoi(tok.substr(off, end - off));
      if (end != tok.size()) throw LexError("trailing characters in token '" + tok + "'");
      return pos;
    };
    if (tok.rfind("cup", 0) == 0) {
      t.kind = TokKind::Cup;
      t.pos = read_pos(3, true);
    } else if (tok.rfind("cap", 0) == 0) {
      t.kind = TokKind::Cap;
      t.pos = read_pos(3, true);
    } else if (tok[0] == 'Y') {
      t.kind = TokKind::Split;
      t.pos = read_pos(1, false);
    } else if (tok[0] == 'L') {
      t.kind = TokKind::Merge;
      t.pos = read_pos(1, false);
    } else if (tok[0] == 's') {
      bool inv = tok.back() == '-';
      std::string body = inv ? tok.substr(0, tok.size() - 1) : tok;
      t.kind = inv ? TokKind::CrossInv : TokKind::Cross;
      size_t end = 1;
      while (end < body.size() && std::isdigit(static_cast<unsigned char>(body[end]))) ++end;
      if (end == 1 || end != body.size()) throw LexError("bad crossing token '" + tok + "'");
      t.pos = std::stoi(body.substr(1));
    } else {
      throw LexError("unknown token '" + tok + "'");
    }
    w.tokens.push_back(t);
  }
  validate_word(w);
  return w;
}

// ---- moves ---------------------------------------------------------------

enum class DiagramMove { Unwind, Whitehead, BraidRelation, CrossingCancel };

inline const char* to_string(DiagramMove m) {
  switch (m) {
    case DiagramMove::Unwind: return "unwind";
    case DiagramMove::Whitehead: return "whitehead";
    case DiagramMove::BraidRelation: return "braid-relation";
    case DiagramMove::CrossingCancel: return "crossing-cancel";
  }
  return "?";
}

namespace diagramdetail {

inline bool is_cross(const DiagramToken& t) {
  return t.kind == TokKind::Cross || t.kind == TokKind::CrossInv;
}

// Structural outcome of a short token sequence on labeled strands: the final
// labels plus every vertex/crossing event.  Two sequences with equal
// outcomes are the same local picture, so they may be exchanged.
struct LocalSim {
  std::vector<std::string> strands;
  std::multiset<std::string> events;
  bool ok = true;
};

inline LocalSim simulate_local(const std::vector<DiagramToken>& toks, int width,
                               const std::vector<std::string>& names) {
  LocalSim sim;
  for (int i = 0; i < width; ++i) sim.strands.push_back("#" + std::to_string(i));
  for (size_t i = 0; i < toks.size(); ++i) {
    const auto& t = toks[i];
    int count = static_cast<int>(sim.strands.size());
    int p = t.pos == 0 ? (t.kind == TokKind::Cup ? count + 1 : count) : t.pos;
    switch (t.kind) {
      case TokKind::Cup:
        if (p < 1 || p > count + 1) return {{}, {}, false};
        sim.strands.insert(sim.strands.begin() + (p - 1), names[i]);
        break;
      case TokKind::Cap:
        if (p < 1 || p > count) return {{}, {}, false};
        sim.events.insert("cap:" + sim.strands[p - 1]);
        sim.strands.erase(sim.strands.begin() + (p - 1));
        break;
      case TokKind::Split:
        if (p < 1 || p > count) return {{}, {}, false};
        sim.strands.insert(sim.strands.begin() + p, sim.strands[p - 1] + ".R");
        sim.strands[p - 1] += ".L";
        break;
      case TokKind::Merge:
        if (p < 1 || p + 1 > count) return {{}, {}, false};
        sim.strands[p - 1] = "(" + sim.strands[p - 1] + "+" + sim.strands[p] + ")";
        sim.strands.erase(sim.strands.begin() + p);
        break;
      case TokKind::Cross:
      case TokKind::CrossInv:
        if (p < 1 || p + 1 > count) return {{}, {}, false};
        sim.events.insert(std::string(t.kind == TokKind::Cross ? "x+" : "x-") + ":" +
                          sim.strands[p - 1] + "/" + sim.strands[p]);
        std::swap(sim.strands[p - 1], sim.strands[p]);
        break;
    }
  }
  return sim;
}

// Exchange two adjacent tokens (positions already made explicit) when some
// re-anchoring makes the swapped order produce the identical local picture.
inline bool commute_adjacent(const DiagramToken& a, const DiagramToken& b, int width,
                             DiagramToken& b2, DiagramToken& a2) {
  LocalSim ref = simulate_local({a, b}, width, {"A", "B"});
  if (!ref.ok) return false;
  for (int db = -1; db <= 1; ++db)
    for (int da = -1; da <= 1; ++da) {
      DiagramToken bc = b, ac = a;
      bc.pos = b.pos + db;
      ac.pos = a.pos + da;
      if (bc.pos < 1 || ac.pos < 1) continue;
      LocalSim alt = simulate_local({bc, ac}, width, {"B", "A"});
      if (!alt.ok) continue;
      if (alt.strands == ref.strands && alt.events == ref.events) {
        b2 = bc;
        a2 = ac;
        return true;
      }
    }
  return false;
}

// every rewrite of a few tokens starting at `site`; true when the move
// matches and yields a valid word
inline bool try_move(const DiagramWord& w, DiagramMove move, int site, int variant,
                     DiagramWord& out) {
  const auto& toks = w.tokens;
  int n = static_cast<int>(toks.size());
  if (site < 0 || site >= n) return false;
  auto copy_with = [&](int erase_from, int erase_count, std::vector<DiagramToken> insert) {
    out.tokens.clear();
    out.tokens.insert(out.tokens.end(), toks.begin(), toks.begin() + erase_from);
    out.tokens.insert(out.tokens.end(), insert.begin(), insert.end());
    out.tokens.insert(out.tokens.end(), toks.begin() + erase_from + erase_count, toks.end());
    try {
      validate_word(out);
    } catch (const StrandCountError&) {
      return false;
    }
    return true;
  };
  // effective 1-based position of a bare cup/cap given the running count
  auto eff_pos = [&](int i) {
    const auto& t = toks[i];
    if (t.pos != 0) return t.pos;
    return t.kind == TokKind::Cup ? w.profile[i] + 1 : w.profile[i];
  };

  switch (move) {
    case DiagramMove::CrossingCancel: {
      if (site + 1 >= n) return false;
      const auto &a = toks[site], &b = toks[site + 1];
      if (!is_cross(a) || !is_cross(b) || a.pos != b.pos || a.kind == b.kind) return false;
      return copy_with(site, 2, {});
    }
    case DiagramMove::Unwind: {
      if (site + 1 >= n) return false;
      const auto &a = toks[site], &b = toks[site + 1];
      // crossing of the two legs right above a split, or right below a merge
      if (a.kind == TokKind::Split && is_cross(b) && b.pos == a.pos) return copy_with(site, 2, {a});
      if (is_cross(a) && b.kind == TokKind::Merge && a.pos == b.pos) return copy_with(site, 2, {b});
      // retracting a free end through a crossing
      if (is_cross(a) && b.kind == TokKind::Cap) {
        int p = eff_pos(site + 1);
        if (p == a.pos) return copy_with(site, 2, {{TokKind::Cap, a.pos + 1}});
        if (p == a.pos + 1) return copy_with(site, 2, {{TokKind::Cap, a.pos}});
      }
      if (a.kind == TokKind::Cup && is_cross(b)) {
        int p = eff_pos(site);
        if (p == b.pos) return copy_with(site, 2, {{TokKind::Cup, b.pos + 1}});
        if (p == b.pos + 1) return copy_with(site, 2, {{TokKind::Cup, b.pos}});
      }
      // a trivalent vertex pulled through a crossing (both legs cross, same
      // sign): [YN sN+1 sN] ~ [sN YN+1], [YN sN-1 sN] ~ [sN-1 YN-1],
      // and the merge mirrors
      if (site + 2 < n && a.kind == TokKind::Split && is_cross(b) && is_cross(toks[site + 2]) &&
          b.kind == toks[site + 2].kind) {
        const auto& c = toks[site + 2];
        if (b.pos == a.pos + 1 && c.pos == a.pos)
          return copy_with(site, 3, {{b.kind, a.pos}, {TokKind::Split, a.pos + 1}});
        if (b.pos == a.pos - 1 && c.pos == a.pos)
          return copy_with(site, 3, {{b.kind, a.pos - 1}, {TokKind::Split, a.pos - 1}});
      }
      if (site + 2 < n && is_cross(a) && is_cross(b) && a.kind == b.kind &&
          toks[site + 2].kind == TokKind::Merge) {
        const auto& c = toks[site + 2];
        if (a.pos == c.pos && b.pos == c.pos - 1)
          return copy_with(site, 3, {{TokKind::Merge, c.pos - 1}, {a.kind, c.pos - 1}});
        if (a.pos == c.pos && b.pos == c.pos + 1)
          return copy_with(site, 3, {{TokKind::Merge, c.pos + 1}, {a.kind, c.pos}});
      }
      return false;
    }
    case DiagramMove::Whitehead: {
      if (site + 1 >= n) return false;
      const auto &a = toks[site], &b = toks[site + 1];
      int p = a.pos;
      // I <-> H rotations: [Lp Yp] ~ [Yp Lp+1] ~ [Yp+1 Lp]
      if (a.kind == TokKind::Merge && b.kind == TokKind::Split && b.pos == p)
        return copy_with(site, 2, {{TokKind::Split, p}, {TokKind::Merge, p + 1}});
      if (a.kind == TokKind::Split && b.kind == TokKind::Merge && b.pos == p + 1)
        return copy_with(site, 2, {{TokKind::Split, p + 1}, {TokKind::Merge, p}});
      if (a.kind == TokKind::Split && b.kind == TokKind::Merge && a.pos == b.pos + 1)
        return copy_with(site, 2, {{TokKind::Merge, b.pos}, {TokKind::Split, b.pos}});
      // rotations of the edge between two merges or two splits
      // (re-association): [Lp+1 Lp] ~ [Lp Lp] and [Yp Yp] ~ [Yp Yp+1]
      if (a.kind == TokKind::Merge && b.kind == TokKind::Merge && a.pos == b.pos + 1)
        return copy_with(site, 2, {{TokKind::Merge, b.pos}, {TokKind::Merge, b.pos}});
      if (a.kind == TokKind::Merge && b.kind == TokKind::Merge && a.pos == b.pos)
        return copy_with(site, 2, {{TokKind::Merge, p + 1}, {TokKind::Merge, p}});
      if (a.kind == TokKind::Split && b.kind == TokKind::Split && a.pos == b.pos)
        return copy_with(site, 2, {{TokKind::Split, p}, {TokKind::Split, p + 1}});
      if (a.kind == TokKind::Split && b.kind == TokKind::Split && b.pos == a.pos + 1)
        return copy_with(site, 2, {{TokKind::Split, p}, {TokKind::Split, p}});
      return false;
    }
    case DiagramMove::BraidRelation: {
      if (site + 1 >= n) return false;
      const auto &a = toks[site], &b = toks[site + 1];
      // far commutation of crossings
      if (is_cross(a) && is_cross(b) && std::abs(a.pos - b.pos) >= 2)
        return copy_with(site, 2, {b, a});
      // R3 with uniform sign
      if (site + 2 < n) {
        const auto& c = toks[site + 2];
        if (is_cross(a) && is_cross(b) && is_cross(c) && a.kind == b.kind && b.kind == c.kind &&
            a.pos == c.pos && std::abs(a.pos - b.pos) == 1)
          return copy_with(site, 3, {b, a, b});
      }
      // slide a crossing past a distant split/merge (indices shift)
      if (variant == 0 && a.kind == TokKind::Split && is_cross(b)) {
        if (b.pos >= a.pos + 2) return copy_with(site, 2, {{b.kind, b.pos - 1}, a});
        if (b.pos + 1 <= a.pos - 1) return copy_with(site, 2, {b, a});
      }
      if (variant == 0 && is_cross(a) && b.kind == TokKind::Split) {
        if (a.pos >= b.pos + 1) return copy_with(site, 2, {b, {a.kind, a.pos + 1}});
        if (a.pos + 1 <= b.pos - 1) return copy_with(site, 2, {b, a});
      }
      if (variant == 0 && a.kind == TokKind::Merge && is_cross(b)) {
        if (b.pos >= a.pos + 1) return copy_with(site, 2, {{b.kind, b.pos + 1}, a});
        if (b.pos + 1 <= a.pos - 1) return copy_with(site, 2, {b, a});
      }
      if (variant == 0 && is_cross(a) && b.kind == TokKind::Merge) {
        if (a.pos >= b.pos + 2) return copy_with(site, 2, {b, {a.kind, a.pos - 1}});
        if (a.pos + 1 <= b.pos - 1) return copy_with(site, 2, {b, a});
      }
      // generic exchange of independent adjacent tokens (covers crossings,
      // cups, caps, splits and merges in every combination)
      {
        DiagramToken ea = a, eb = b;
        ea.pos = eff_pos(site);
        eb.pos = eff_pos(site + 1);
        DiagramToken b2, a2;
        if (commute_adjacent(ea, eb, w.profile[site], b2, a2))
          return copy_with(site, 2, {b2, a2});
      }
      return false;
    }
  }
  return false;
}

}  // namespace diagramdetail

/// Applies one move at a site; PatternMismatch when it does not match.
inline DiagramWord apply_move(const DiagramWord& w, DiagramMove move, int site) {
  DiagramWord out;
  if (!diagramdetail::try_move(w, move, site, 0, out))
    throw PatternMismatchError(std::string(to_string(move)) + " does not match at token " +
                               std::to_string(site));
  return out;
}

enum class NormalizeStatus { Planar, BudgetExhausted };

struct NormalizeResult {
  DiagramWord word;
  NormalizeStatus status = NormalizeStatus::BudgetExhausted;
  int states_explored = 0;
};

/// Best-first search over the moves, minimizing the crossing count.  No move
/// increases crossings, so the result never exceeds the input's count.  For
/// words of at most 3 strands this planarizes on the fixture corpus; beyond
/// 3 strands it is best-effort only.
inline NormalizeResult normalize(const DiagramWord& start, int budget = 100000) {
  auto keyof = [](const DiagramWord& w) { return render(w); };
  auto better = [](const DiagramWord& a, const DiagramWord& b) {
    if (a.crossings() != b.crossings()) return a.crossings() < b.crossings();
    if (a.tokens.size() != b.tokens.size()) return a.tokens.size() < b.tokens.size();
    return render(a) < render(b);
  };

  std::set<std::string> seen;
  // priority: (crossings, length, text) ascending
  auto cmp = [&](const DiagramWord& a, const DiagramWord& b) { return better(b, a); };
  std::priority_queue<DiagramWord, std::vector<DiagramWord>, decltype(cmp)> queue(cmp);
  queue.push(start);
  seen.insert(keyof(start));

  NormalizeResult res;
  res.word = start;
  const DiagramMove moves[] = {DiagramMove::CrossingCancel, DiagramMove::Unwind,
                               DiagramMove::BraidRelation, DiagramMove::Whitehead};
  while (!queue.empty() && res.states_explored < budget) {
    DiagramWord cur = queue.top();
    queue.pop();
    ++res.states_explored;
    if (better(cur, res.word)) res.word = cur;
    if (cur.crossings() == 0) {
      res.word = cur;
      res.status = NormalizeStatus::Planar;
      return res;
    }
    for (DiagramMove m : moves)
      for (int site = 0; site < static_cast<int>(cur.tokens.size()); ++site) {
        DiagramWord next;
        if (!diagramdetail::try_move(cur, m, site, 0, next)) continue;
        if (seen.insert(keyof(next)).second) queue.push(next);
      }
  }
  if (res.word.crossings() == 0) res.status = NormalizeStatus::Planar;
  return res;
}

/// Trivalent-graph skeleton in DOT: cups, caps and Y/L vertices joined by
/// strand edges; crossings only permute strand identities.
inline std::string diagram_to_dot(const DiagramWord& w, const std::string& title = "diagram") {
  std::ostringstream os;
  os << "graph \"" << title << "\" {\n  rankdir=BT;\n";
  std::vector<int> dangling;  // per strand position: vertex id the strand hangs from
  int next_vertex = 0;
  auto vertex = [&](const std::string& label) {
    os << "  v" << next_vertex << " [label=\"" << label << "\"];\n";
    return next_vertex++;
  };
  auto edge = [&](int a, int b) { os << "  v" << a << " -- v" << b << ";\n"; };
  for (const auto& t : w.tokens) {
    int p = t.pos == 0 ? (t.kind == TokKind::Cup ? static_cast<int>(dangling.size()) + 1
                                                 : static_cast<int>(dangling.size()))
                       : t.pos;
    switch (t.kind) {
      case TokKind::Cup:
        dangling.insert(dangling.begin() + (p - 1), vertex("cup"));
        break;
      case TokKind::Cap: {
        int v = vertex("cap");
        edge(dangling[p - 1], v);
        dangling.erase(dangling.begin() + (p - 1));
        break;
      }
      case TokKind::Split: {
        int v = vertex("Y");
        edge(dangling[p - 1], v);
        dangling[p - 1] = v;
        dangling.insert(dangling.begin() + p, v);
        break;
      }
      case TokKind::Merge: {
        int v = vertex("L");
        edge(dangling[p - 1], v);
        edge(dangling[p], v);
        dangling.erase(dangling.begin() + p);
        dangling[p - 1] = v;
        break;
      }
      case TokKind::Cross:
      case TokKind::CrossInv:
        std::swap(dangling[p - 1], dangling[p]);
        break;
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace bdomain
