#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "gpfactor/errors.hpp"
#include "gpfactor/graph.hpp"

namespace gpf {

class NormalWord;
namespace detail {
inline NormalWord from_reduced(const SimpleGraph& g, const std::vector<int>& seq);
}

// Canonical form of an element of the right-angled Coxeter group of a graph:
// successive layers of cliques, each layer stored as a vertex mask. The
// concatenation of the layers (each in ascending vertex order) is a reduced
// expression; a letter sits in a layer only if the previous layer blocks it
// (contains the letter or a non-commuting one), so the form is unique.
class NormalWord {
 public:
  NormalWord() : graph_(nullptr), length_(0) {}
  explicit NormalWord(const SimpleGraph& g) : graph_(&g), length_(0) {}

  const SimpleGraph& graph() const { return *graph_; }
  int length() const { return length_; }
  bool is_identity() const { return length_ == 0; }
  const std::vector<VertexSet>& layers() const { return layers_; }

  VertexSet first_layer() const { return layers_.empty() ? 0 : layers_.front(); }

  VertexSet support() const {
    VertexSet s = 0;
    for (VertexSet t : layers_) s |= t;
    return s;
  }

  // Canonical reduced expression: layers flattened, ascending within a layer.
  std::vector<int> letters() const {
    std::vector<int> out;
    out.reserve(length_);
    for (VertexSet t : layers_)
      for (int v : set_vertices(t)) out.push_back(v);
    return out;
  }

  std::string str() const {
    if (is_identity()) return "e";
    std::string out;
    for (int v : letters()) {
      if (!out.empty()) out += '.';
      out += graph_->id(v);
    }
    return out;
  }

  bool operator==(const NormalWord& o) const { return layers_ == o.layers_; }
  bool operator!=(const NormalWord& o) const { return !(*this == o); }
  bool operator<(const NormalWord& o) const {
    if (length_ != o.length_) return length_ < o.length_;
    return letters() < o.letters();
  }

  // Packed canonical letters, usable as a hash/map key for words of length
  // <= 10 over graphs with <= 63 vertices.
  std::uint64_t key() const {
    std::uint64_t k = 0;
    for (int v : letters()) k = k * 67 + static_cast<std::uint64_t>(v + 1);
    return k;
  }

 private:
  friend NormalWord detail::from_reduced(const SimpleGraph&, const std::vector<int>&);

  const SimpleGraph* graph_;
  std::vector<VertexSet> layers_;
  int length_;
};

namespace detail {

// Right-multiply the reduced letter sequence by one generator: the letter
// cancels against the rightmost equal letter it commutes past, else appends.
inline void push_letter(const SimpleGraph& g, std::vector<int>& seq, int x) {
  for (int i = static_cast<int>(seq.size()) - 1; i >= 0; --i) {
    if (seq[i] == x) {
      seq.erase(seq.begin() + i);
      return;
    }
    if (!g.adjacent(seq[i], x)) break;
  }
  seq.push_back(x);
}

// Layer index of every letter of a reduced sequence: one past the deepest
// earlier letter it depends on (equal or non-adjacent).
inline std::vector<int> layer_levels(const SimpleGraph& g,
                                     const std::vector<int>& seq) {
  std::vector<int> level(seq.size(), 0);
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (seq[j] == seq[i] || !g.adjacent(seq[j], seq[i]))
        level[i] = std::max(level[i], level[j] + 1);
  return level;
}

inline NormalWord from_reduced(const SimpleGraph& g, const std::vector<int>& seq) {
  NormalWord w(g);
  std::vector<int> level = layer_levels(g, seq);
  int depth = seq.empty() ? 0 : 1 + *std::max_element(level.begin(), level.end());
  w.layers_.assign(depth, 0);
  for (std::size_t i = 0; i < seq.size(); ++i) w.layers_[level[i]] |= vbit(seq[i]);
  w.length_ = static_cast<int>(seq.size());
  return w;
}

}  // namespace detail

// Canonical form of the product of the given letters. Idempotent and
// constant on all reduced expressions of the same element.
inline NormalWord normalize(const SimpleGraph& g, const std::vector<int>& letters) {
  std::vector<int> seq;
  seq.reserve(letters.size());
  for (int x : letters) {
    if (x < 0 || x >= g.size()) throw input_error("letter names no vertex");
    detail::push_letter(g, seq, x);
  }
  return detail::from_reduced(g, seq);
}

inline NormalWord normalize_ids(const SimpleGraph& g,
                                const std::vector<std::string>& ids) {
  std::vector<int> letters;
  letters.reserve(ids.size());
  for (const auto& id : ids) letters.push_back(g.index_of(id));
  return normalize(g, letters);
}

inline bool is_reduced(const SimpleGraph& g, const std::vector<int>& letters) {
  return normalize(g, letters).length() == static_cast<int>(letters.size());
}

inline NormalWord multiply(const NormalWord& a, const NormalWord& b) {
  if (&a.graph() != &b.graph())
    throw input_error("words over different ambient graphs");
  std::vector<int> seq = a.letters();
  std::vector<int> rhs = b.letters();
  seq.insert(seq.end(), rhs.begin(), rhs.end());
  return normalize(a.graph(), seq);
}

// Generators are involutions, so the inverse is the reversed expression.
inline NormalWord inverse(const NormalWord& w) {
  std::vector<int> seq = w.letters();
  std::reverse(seq.begin(), seq.end());
  return detail::from_reduced(w.graph(), seq);
}

// The set of possible first letters of a reduced expression is exactly the
// first layer; mirrored for last letters.
inline VertexSet possible_first_letters(const NormalWord& w) {
  return w.first_layer();
}
inline VertexSet possible_last_letters(const NormalWord& w) {
  return inverse(w).first_layer();
}

// w lies in W(S): s.w is reduced for every s in the vertex set S.
inline bool in_W(const NormalWord& w, VertexSet s) {
  w.graph().check_subset(s);
  return (possible_first_letters(w) & s) == 0;
}

// w lies in W'(S): w.s is reduced for every s in S.
inline bool in_W_prime(const NormalWord& w, VertexSet s) {
  w.graph().check_subset(s);
  return (possible_last_letters(w) & s) == 0;
}

// Link of a word: intersection of the links of its letters (all of the
// graph for the empty word).
inline VertexSet link_of_word(const NormalWord& w) {
  return w.graph().link(w.support());
}

// Reduced word supported on one clique, every letter once; includes e.
inline bool is_clique_word(const NormalWord& w) {
  return w.layers().size() <= 1;
}

// "u starts with p": some reduced expression of u begins with one of p,
// i.e. |p^-1 u| = |u| - |p|.
inline bool starts_with(const NormalWord& u, const NormalWord& p) {
  return multiply(inverse(p), u).length() == u.length() - p.length();
}

// Every element of length <= max_len, generators restricted to `gens`,
// grouped by length and lexicographic within a length.
inline std::vector<NormalWord> enumerate_subgroup_up_to(const SimpleGraph& g,
                                                        int max_len, VertexSet gens,
                                                        std::size_t cap = 1000000) {
  g.check_subset(gens);
  if (max_len < 0) throw input_error("negative word length bound");
  std::vector<NormalWord> all{NormalWord(g)};
  std::vector<NormalWord> frontier = all;
  std::vector<int> gen_list = set_vertices(gens);
  for (int len = 1; len <= max_len; ++len) {
    std::map<std::vector<int>, NormalWord> next;
    for (const NormalWord& w : frontier) {
      std::vector<int> base = w.letters();
      for (int s : gen_list) {
        std::vector<int> seq = base;
        detail::push_letter(g, seq, s);
        if (static_cast<int>(seq.size()) != len) continue;
        NormalWord nw = detail::from_reduced(g, seq);
        next.emplace(nw.letters(), std::move(nw));
      }
    }
    frontier.clear();
    for (auto& [k, w] : next) frontier.push_back(std::move(w));
    if (all.size() + frontier.size() > cap)
      throw resource_error("word enumeration exceeds cap of " +
                           std::to_string(cap) + " elements");
    all.insert(all.end(), frontier.begin(), frontier.end());
    if (frontier.empty()) break;  // finite group exhausted
  }
  return all;
}

inline std::vector<NormalWord> enumerate_up_to(const SimpleGraph& g, int max_len,
                                               std::size_t cap = 1000000) {
  return enumerate_subgroup_up_to(g, max_len, g.all(), cap);
}

// A reduced letter sequence together with the permutation onto canonical
// positions; position[i] is where letter i of the input lands in the
// canonical expression. Equal letters keep their relative order.
struct Realization {
  NormalWord word;
  std::vector<int> position;

  static Realization of(const SimpleGraph& g, const std::vector<int>& seq) {
    std::vector<int> level = detail::layer_levels(g, seq);
    std::vector<int> order(seq.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      if (level[a] != level[b]) return level[a] < level[b];
      return seq[a] < seq[b];
    });
    Realization r;
    r.word = detail::from_reduced(g, seq);
    r.position.assign(seq.size(), -1);
    for (std::size_t rank = 0; rank < order.size(); ++rank)
      r.position[order[rank]] = static_cast<int>(rank);
    return r;
  }
};

// Exhaustive check of the combinatorial lemma behind iterated conditional
// expectations: for w over g1 and u,u' with no g1-letter at the start and no
// g2-letter at the end, u^-1 w u' lies in the subgroup of g2 exactly when
// u = u' and w lies in the subgroup of g1 meet g2 meet Link(u).
struct CombinatoricsReport {
  bool pass = true;
  long long checked = 0;
  std::string counterexample;
};

inline CombinatoricsReport verify_combinatorics_lemma(const SimpleGraph& g,
                                                      VertexSet g1, VertexSet g2,
                                                      int max_len,
                                                      std::size_t cap = 1000000) {
  g.check_subset(g1);
  g.check_subset(g2);
  CombinatoricsReport rep;
  std::vector<NormalWord> ws = enumerate_subgroup_up_to(g, max_len, g1, cap);
  std::vector<NormalWord> us;
  for (const NormalWord& u : enumerate_up_to(g, max_len, cap))
    if ((possible_first_letters(u) & g1) == 0 &&
        (possible_last_letters(u) & g2) == 0)
      us.push_back(u);
  for (const NormalWord& w : ws)
    for (const NormalWord& u : us)
      for (const NormalWord& u2 : us) {
        NormalWord prod = multiply(inverse(u), multiply(w, u2));
        bool lhs = (prod.support() & ~g2) == 0;
        bool rhs = u == u2 && (w.support() & ~(g1 & g2 & link_of_word(u))) == 0;
        ++rep.checked;
        if (lhs != rhs) {
          rep.pass = false;
          rep.counterexample = "w=" + w.str() + " u=" + u.str() + " u'=" + u2.str();
          return rep;
        }
      }
  return rep;
}

}  // namespace gpf
