#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "gpfactor/errors.hpp"
#include "gpfactor/graph.hpp"
#include "gpfactor/word.hpp"

namespace gpf {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealMat = Eigen::MatrixXd;

// Deterministic random source: bit-identical across platforms, one seed per
// verification run.
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double uniform01() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
  double uniform_pm1() { return 2.0 * uniform01() - 1.0; }
  int below(int n) { return static_cast<int>(eng() % static_cast<std::uint64_t>(n)); }
};

// Finite-dimensional vertex model: a commutative algebra C^d with a faithful
// state, or a full matrix algebra M_d with its normalized trace. Coordinates
// serve both for algebra elements and for vectors of H = L2(model, state).
class VertexModel {
 public:
  enum class Kind { Commutative, Matrix };

  static VertexModel commutative(std::vector<double> weights) {
    if (weights.size() < 2) throw input_error("vertex model needs dimension >= 2");
    double sum = 0.0;
    for (double w : weights) {
      if (!(w > 0.0)) throw input_error("state weights must be positive (faithful)");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw input_error("state weights must sum to 1");
    VertexModel m;
    m.kind_ = Kind::Commutative;
    m.d_ = static_cast<int>(weights.size());
    m.weights_ = std::move(weights);
    m.init();
    return m;
  }

  static VertexModel matrix_tracial(int n) {
    if (n < 2) throw input_error("matrix model needs size >= 2");
    VertexModel m;
    m.kind_ = Kind::Matrix;
    m.d_ = n;
    m.init();
    return m;
  }

  Kind kind() const { return kind_; }
  int algebra_size() const { return d_; }
  int hdim() const { return kind_ == Kind::Commutative ? d_ : d_ * d_; }
  int rdim() const { return hdim() - 1; }
  // Matrix models carry the normalized trace; commutative states are
  // automatically tracial.
  bool tracial() const { return true; }

  Vec omega() const {
    Vec o = Vec::Zero(hdim());
    if (kind_ == Kind::Commutative)
      o.setOnes();
    else
      for (int i = 0; i < d_; ++i) o(i * d_ + i) = 1.0;
    return o;
  }

  Cplx inner(const Vec& x, const Vec& y) const {
    Cplx s = 0.0;
    if (kind_ == Kind::Commutative) {
      for (int i = 0; i < d_; ++i) s += weights_[i] * x(i) * std::conj(y(i));
    } else {
      s = x.dot(y) / static_cast<double>(d_);  // dot conjugates the first arg
      s = std::conj(s);
    }
    return s;
  }

  Cplx state(const Vec& a) const { return inner(act(a, omega()), omega()); }

  // Left action of an algebra element on H coordinates.
  Vec act(const Vec& a, const Vec& xi) const {
    Vec out(hdim());
    if (kind_ == Kind::Commutative) {
      for (int i = 0; i < d_; ++i) out(i) = a(i) * xi(i);
    } else {
      for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) {
          Cplx s = 0.0;
          for (int k = 0; k < d_; ++k) s += a(i * d_ + k) * xi(k * d_ + j);
          out(i * d_ + j) = s;
        }
    }
    return out;
  }

  Vec adjoint_elem(const Vec& a) const {
    Vec out(hdim());
    if (kind_ == Kind::Commutative) {
      for (int i = 0; i < d_; ++i) out(i) = std::conj(a(i));
    } else {
      for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) out(i * d_ + j) = std::conj(a(j * d_ + i));
    }
    return out;
  }

  // Columns: 0 = Omega, 1..rdim = orthonormal basis of its complement.
  const Mat& onb() const { return onb_; }

  // Algebra element whose GNS vector is the k-th reduced basis vector.
  Vec element_of_leg(int k) const { return onb_.col(k + 1); }

  // Operator on H written in the ONB: A(k,j) = <op b_j, b_k>.
  Mat op_onb(const Mat& op_coords) const {
    Mat a(hdim(), hdim());
    for (int j = 0; j < hdim(); ++j) {
      Vec img = op_coords * onb_.col(j);
      for (int k = 0; k < hdim(); ++k) a(k, j) = inner(img, onb_.col(k));
    }
    return a;
  }

  Mat element_op_onb(const Vec& elem) const {
    Mat a(hdim(), hdim());
    for (int j = 0; j < hdim(); ++j) {
      Vec img = act(elem, onb_.col(j));
      for (int k = 0; k < hdim(); ++k) a(k, j) = inner(img, onb_.col(k));
    }
    return a;
  }

  // x -> x* as a real matrix in the ONB (the basis is real, so the
  // antilinear conjugation is this matrix followed by coefficient
  // conjugation).
  const RealMat& conj_onb() const { return conj_; }

  Vec random_element(Rng& rng) const {
    Vec a(hdim());
    for (int i = 0; i < hdim(); ++i) a(i) = rng.uniform_pm1();
    return a;
  }

  Vec random_centered(Rng& rng) const {
    Vec a = random_element(rng);
    return a - state(a) * omega();  // identity has Omega's coordinates
  }

  Mat random_operator(Rng& rng) const {
    Mat a(hdim(), hdim());
    for (int j = 0; j < hdim(); ++j)
      for (int i = 0; i < hdim(); ++i) a(i, j) = rng.uniform_pm1();
    return a;
  }

 private:
  void init() {
    // Gram-Schmidt over the coordinate basis, seeded with Omega.
    std::vector<Vec> basis;
    basis.push_back(omega());
    for (int c = 0; c < hdim(); ++c) {
      Vec v = Vec::Zero(hdim());
      v(c) = 1.0;
      for (const Vec& b : basis) v -= inner(v, b) * b;
      double norm = std::sqrt(std::abs(inner(v, v).real()));
      if (norm > 1e-9) basis.push_back(v / norm);
    }
    if (static_cast<int>(basis.size()) != hdim())
      throw input_error("vertex model basis construction failed");
    onb_.resize(hdim(), hdim());
    for (int c = 0; c < hdim(); ++c) onb_.col(c) = basis[c];
    conj_.resize(hdim(), hdim());
    for (int j = 0; j < hdim(); ++j) {
      Vec jb = adjoint_elem(onb_.col(j));  // coordinates of (b_j)^*
      for (int k = 0; k < hdim(); ++k) conj_(k, j) = inner(jb, onb_.col(k)).real();
    }
  }

  Kind kind_ = Kind::Commutative;
  int d_ = 0;
  std::vector<double> weights_;
  Mat onb_;
  RealMat conj_;
};

// One word's slice of the truncated graph-product space.
struct WordBlock {
  NormalWord word;
  std::vector<int> legs;            // canonical letters
  long long offset = 0;
  std::vector<long long> strides;   // last leg varies fastest
  long long size = 1;
};

// Orthonormal basis of the direct sum of the reduced tensor spaces over all
// words of length <= depth; the basis is indexed by (word, per-leg choice).
class TruncatedFockSpace {
 public:
  TruncatedFockSpace(const SimpleGraph& g, std::vector<VertexModel> models,
                     int depth, long long dim_cap = 20000)
      : graph_(&g), models_(std::move(models)), depth_(depth) {
    if (models_.size() != static_cast<std::size_t>(g.size()))
      throw input_error("one vertex model per vertex required");
    if (depth < 0) throw input_error("negative depth");
    long long off = 0;
    for (const NormalWord& w : enumerate_up_to(g, depth)) {
      WordBlock b;
      b.word = w;
      b.legs = w.letters();
      b.offset = off;
      b.strides.assign(b.legs.size(), 1);
      for (int i = static_cast<int>(b.legs.size()) - 1; i >= 0; --i) {
        b.strides[i] = b.size;
        b.size *= models_[b.legs[i]].rdim();
      }
      off += b.size;
      if (off > dim_cap)
        throw resource_error("truncated space dimension exceeds cap of " +
                             std::to_string(dim_cap));
      index_.emplace(b.legs, static_cast<int>(blocks_.size()));
      blocks_.push_back(std::move(b));
    }
    dim_ = off;
  }

  const SimpleGraph& graph() const { return *graph_; }
  const VertexModel& model(int v) const { return models_[v]; }
  const std::vector<VertexModel>& models() const { return models_; }
  int depth() const { return depth_; }
  long long dim() const { return dim_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  const WordBlock& block(int i) const { return blocks_[i]; }

  int block_of(const std::vector<int>& canonical_letters) const {
    auto it = index_.find(canonical_letters);
    return it == index_.end() ? -1 : it->second;
  }

  long long index(int block_idx, const std::vector<int>& leg_values) const {
    const WordBlock& b = blocks_[block_idx];
    long long i = b.offset;
    for (std::size_t k = 0; k < leg_values.size(); ++k)
      i += b.strides[k] * leg_values[k];
    return i;
  }

  Vec vacuum() const {
    Vec o = Vec::Zero(dim_);
    o(0) = 1.0;
    return o;
  }

 private:
  const SimpleGraph* graph_;
  std::vector<VertexModel> models_;
  int depth_;
  std::vector<WordBlock> blocks_;
  std::map<std::vector<int>, int> index_;
  long long dim_ = 0;
};

// Dense operator with its word-length budget: it maps length-n vectors into
// lengths <= n + budget, so columns with word length <= depth - budget are
// computed without truncation loss.
struct OperatorRep {
  Mat mat;
  int budget = 0;
};

namespace fock_detail {

// Visit every basis column of a block: f(column_index, leg_values).
template <class F>
inline void for_each_column(const TruncatedFockSpace& sp, int bi, const F& f) {
  const WordBlock& b = sp.block(bi);
  std::vector<int> vals(b.legs.size(), 0);
  for (long long c = 0; c < b.size; ++c) {
    f(b.offset + c, vals);
    for (int k = static_cast<int>(vals.size()) - 1; k >= 0; --k) {
      if (++vals[k] < sp.model(b.legs[k]).rdim()) break;
      vals[k] = 0;
    }
  }
}

}  // namespace fock_detail

// The GNS embedding of one vertex: creation / diagonal / annihilation with
// respect to the identification of the space with H_v tensor H(v). Accepts
// any operator on H_v given in ONB coordinates (row/col 0 = Omega).
inline OperatorRep lambda_vertex_op(const TruncatedFockSpace& sp, int v,
                                    const Mat& hop) {
  const SimpleGraph& g = sp.graph();
  const VertexModel& mv = sp.model(v);
  if (hop.rows() != mv.hdim() || hop.cols() != mv.hdim())
    throw input_error("operator size does not match the vertex model");
  Mat out = Mat::Zero(sp.dim(), sp.dim());
  for (int bi = 0; bi < sp.block_count(); ++bi) {
    const WordBlock& b = sp.block(bi);
    bool front = has_vertex(b.word.first_layer(), v);
    int pos = -1;
    if (front)
      for (std::size_t i = 0; i < b.legs.size(); ++i)
        if (b.legs[i] == v) {
          pos = static_cast<int>(i);
          break;
        }
    // targets are shared by all columns of the block
    std::vector<int> created_letters, removed_letters;
    Realization created, removed;
    int created_block = -1, removed_block = -1;
    if (front) {
      removed_letters = b.legs;
      removed_letters.erase(removed_letters.begin() + pos);
      removed = Realization::of(g, removed_letters);
      removed_block = sp.block_of(removed.word.letters());
    } else if (b.word.length() + 1 <= sp.depth()) {
      created_letters.assign(1, v);
      created_letters.insert(created_letters.end(), b.legs.begin(), b.legs.end());
      created = Realization::of(g, created_letters);
      created_block = sp.block_of(created.word.letters());
    }
    fock_detail::for_each_column(sp, bi, [&](long long col, const std::vector<int>& vals) {
      if (front) {
        int j = vals[pos] + 1;
        // annihilation: drop the v leg
        if (removed_block >= 0 && hop(0, j) != 0.0) {
          std::vector<int> tv(removed_letters.size());
          int w = 0;
          for (std::size_t i = 0; i < b.legs.size(); ++i) {
            if (static_cast<int>(i) == pos) continue;
            tv[removed.position[w]] = vals[i];
            ++w;
          }
          out(sp.index(removed_block, tv), col) += hop(0, j);
        }
        // diagonal: replace the v leg
        std::vector<int> tv = vals;
        for (int k = 1; k <= mv.rdim(); ++k) {
          if (hop(k, j) == 0.0) continue;
          tv[pos] = k - 1;
          out(sp.index(bi, tv), col) += hop(k, j);
        }
      } else {
        if (hop(0, 0) != 0.0) out(col, col) += hop(0, 0);
        if (created_block >= 0) {
          std::vector<int> tv(created_letters.size());
          for (std::size_t i = 0; i < b.legs.size(); ++i)
            tv[created.position[i + 1]] = vals[i];
          for (int k = 1; k <= mv.rdim(); ++k) {
            if (hop(k, 0) == 0.0) continue;
            tv[created.position[0]] = k - 1;
            out(sp.index(created_block, tv), col) += hop(k, 0);
          }
        }
      }
    });
  }
  return OperatorRep{std::move(out), 1};
}

inline OperatorRep lambda_vertex(const TruncatedFockSpace& sp, int v, const Vec& elem) {
  return lambda_vertex_op(sp, v, sp.model(v).element_op_onb(elem));
}

// Product of state-zero vertex elements along a reduced word.
inline OperatorRep reduced_operator(const TruncatedFockSpace& sp,
                                    const std::vector<int>& letters,
                                    const std::vector<Vec>& elems) {
  if (letters.size() != elems.size())
    throw input_error("one element per letter required");
  if (!is_reduced(sp.graph(), letters))
    throw input_error("reduced operator requires a reduced word");
  Mat acc = Mat::Identity(sp.dim(), sp.dim());
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (std::abs(sp.model(letters[i]).state(elems[i])) > 1e-9)
      throw input_error("reduced operator legs must be state-zero");
    acc = acc * lambda_vertex(sp, letters[i], elems[i]).mat;
  }
  return OperatorRep{std::move(acc), static_cast<int>(letters.size())};
}

inline Cplx vacuum_state(const OperatorRep& op) { return op.mat(0, 0); }

// Linear combination of reduced operators plus a scalar: the form every
// conditional-expectation computation works on.
struct ReducedTerm {
  std::vector<int> letters;
  std::vector<Vec> elems;
  Cplx coeff = 1.0;
};

struct Expansion {
  Cplx scalar = 0.0;
  std::vector<ReducedTerm> terms;
};

inline OperatorRep expansion_matrix(const TruncatedFockSpace& sp, const Expansion& x) {
  Mat acc = x.scalar * Mat::Identity(sp.dim(), sp.dim());
  int budget = 0;
  for (const ReducedTerm& t : x.terms) {
    acc += t.coeff * reduced_operator(sp, t.letters, t.elems).mat;
    budget = std::max(budget, static_cast<int>(t.letters.size()));
  }
  return OperatorRep{std::move(acc), budget};
}

// Trace-preserving conditional expectation onto the subgroup over `lam`:
// keeps exactly the reduced terms supported inside lam.
inline Expansion conditional_expectation(const TruncatedFockSpace& sp,
                                         const Expansion& x, VertexSet lam) {
  sp.graph().check_subset(lam);
  Expansion out;
  out.scalar = x.scalar;
  for (const ReducedTerm& t : x.terms) {
    VertexSet support = 0;
    for (int v : t.letters) support |= vbit(v);
    if ((support & ~lam) == 0) out.terms.push_back(t);
  }
  return out;
}

// Orthogonal projection onto the subspace spanned by words inside lam.
inline OperatorRep projection_onto_subgroup(const TruncatedFockSpace& sp,
                                            VertexSet lam) {
  sp.graph().check_subset(lam);
  Mat p = Mat::Zero(sp.dim(), sp.dim());
  for (int bi = 0; bi < sp.block_count(); ++bi) {
    const WordBlock& b = sp.block(bi);
    if ((b.word.support() & ~lam) != 0) continue;
    for (long long c = 0; c < b.size; ++c) p(b.offset + c, b.offset + c) = 1.0;
  }
  return OperatorRep{std::move(p), 0};
}

// Reads a vector back as an element: the coefficient of basis vector
// (word, legs) is the coefficient of the reduced operator built from the
// corresponding leg elements. Exact because reduced operators map the
// vacuum to their tensor.
inline Expansion element_from_vector(const TruncatedFockSpace& sp, const Vec& x,
                                     double drop_tol = 0.0) {
  Expansion out;
  out.scalar = x(0);
  for (int bi = 0; bi < sp.block_count(); ++bi) {
    const WordBlock& b = sp.block(bi);
    if (b.word.is_identity()) continue;
    fock_detail::for_each_column(sp, bi, [&](long long idx, const std::vector<int>& vals) {
      Cplx c = x(idx);
      if (std::abs(c) <= drop_tol) return;
      ReducedTerm t;
      t.letters = b.legs;
      t.coeff = c;
      for (std::size_t i = 0; i < b.legs.size(); ++i)
        t.elems.push_back(sp.model(b.legs[i]).element_of_leg(vals[i]));
      out.terms.push_back(std::move(t));
    });
  }
  return out;
}

// Modular conjugation of the tracial standard form: reverses the word and
// conjugates the legs; antilinear, so exposed as a vector map.
class ModularConjugation {
 public:
  explicit ModularConjugation(const TruncatedFockSpace& sp) : sp_(&sp) {
    for (const VertexModel& m : sp.models())
      if (!m.tracial()) throw input_error("modular conjugation needs tracial models");
  }

  Vec apply(const Vec& x) const {
    const TruncatedFockSpace& sp = *sp_;
    Vec out = Vec::Zero(sp.dim());
    for (int bi = 0; bi < sp.block_count(); ++bi) {
      const WordBlock& b = sp.block(bi);
      int n = static_cast<int>(b.legs.size());
      std::vector<int> rev(b.legs.rbegin(), b.legs.rend());
      Realization real = Realization::of(sp.graph(), rev);
      int tb = sp.block_of(real.word.letters());
      fock_detail::for_each_column(sp, bi, [&](long long idx, const std::vector<int>& vals) {
        Cplx c = std::conj(x(idx));
        if (c == 0.0) return;
        // expand the per-leg conjugation matrices
        std::vector<int> tv(n, 0);
        scatter(sp, b, real, vals, c, 0, tv, tb, out);
      });
    }
    return out;
  }

  // J b J is linear; built column by column.
  Mat conjugate(const Mat& b) const {
    Mat out(sp_->dim(), sp_->dim());
    Vec unit = Vec::Zero(sp_->dim());
    for (long long c = 0; c < sp_->dim(); ++c) {
      unit(c) = 1.0;
      out.col(c) = apply(b * apply(unit));
      unit(c) = 0.0;
    }
    return out;
  }

 private:
  void scatter(const TruncatedFockSpace& sp, const WordBlock& b,
               const Realization& real,
               const std::vector<int>& vals, Cplx c, int leg,
               std::vector<int>& tv, int tb, Vec& out) const {
    int n = static_cast<int>(b.legs.size());
    if (leg == n) {
      out(sp.index(tb, tv)) += c;
      return;
    }
    // leg `leg` of the original word is position n-1-leg of the reversed
    // sequence
    int src = n - 1 - leg;
    const VertexModel& m = sp.model(b.legs[src]);
    const RealMat& r = m.conj_onb();
    int j = vals[src] + 1;
    for (int k = 1; k <= m.rdim(); ++k) {
      double amp = r(k, j);
      if (amp == 0.0) continue;
      tv[real.position[leg]] = k - 1;
      scatter(sp, b, real, vals, c * amp, leg + 1, tv, tb, out);
    }
  }

  const TruncatedFockSpace* sp_;
};

// The creation / diagonal / annihilation part of a reduced operator along
// the factorization w = w1.w2.w3 (w2 a clique word): each w1 leg is
// sandwiched P a P-perp, each w2 leg P a P, each w3 leg P-perp a P, where P
// projects onto the words with that letter in front.
inline OperatorRep lambda_part(const TruncatedFockSpace& sp, const NormalWord& w1,
                               const NormalWord& w2, const NormalWord& w3,
                               const std::vector<int>& letters,
                               const std::vector<Vec>& elems) {
  const SimpleGraph& g = sp.graph();
  if (!is_clique_word(w2)) throw input_error("middle factor must be a clique word");
  NormalWord prod = multiply(w1, multiply(w2, w3));
  if (prod.length() != w1.length() + w2.length() + w3.length())
    throw input_error("factorization must be reduced");
  if (prod.letters() != letters)
    throw input_error("factorization does not match the operator word");
  // distribute the elements onto the concatenated expression
  std::vector<int> concat = w1.letters();
  {
    std::vector<int> mid = w2.letters(), right = w3.letters();
    concat.insert(concat.end(), mid.begin(), mid.end());
    concat.insert(concat.end(), right.begin(), right.end());
  }
  Realization real = Realization::of(g, concat);
  auto front_projection = [&](int v, bool complement) {
    Mat p = Mat::Zero(sp.dim(), sp.dim());
    for (int bi = 0; bi < sp.block_count(); ++bi) {
      const WordBlock& b = sp.block(bi);
      bool front = has_vertex(b.word.first_layer(), v);
      if (front == complement) continue;
      for (long long c = 0; c < b.size; ++c) p(b.offset + c, b.offset + c) = 1.0;
    }
    return p;
  };
  Mat acc = Mat::Identity(sp.dim(), sp.dim());
  int n1 = w1.length(), n2 = w2.length();
  for (std::size_t i = 0; i < concat.size(); ++i) {
    int v = concat[i];
    const Vec& a = elems[real.position[i]];
    Mat lam = lambda_vertex(sp, v, a).mat;
    Mat piece;
    if (static_cast<int>(i) < n1)
      piece = front_projection(v, false) * lam * front_projection(v, true);
    else if (static_cast<int>(i) < n1 + n2)
      piece = front_projection(v, false) * lam * front_projection(v, false);
    else
      piece = front_projection(v, true) * lam * front_projection(v, false);
    acc = acc * piece;
  }
  return OperatorRep{std::move(acc), prod.length()};
}

// All factorizations w = w1.w2.w3 with w2 a clique word.
inline std::vector<std::array<NormalWord, 3>> clique_triples(const NormalWord& w) {
  const SimpleGraph& g = w.graph();
  // all reduced prefixes of a word
  auto prefixes = [&g](const NormalWord& u) {
    std::vector<NormalWord> out;
    std::vector<std::pair<NormalWord, NormalWord>> stack{{NormalWord(g), u}};
    std::map<std::vector<int>, bool> seen;
    while (!stack.empty()) {
      auto [p, rest] = stack.back();
      stack.pop_back();
      if (!seen.emplace(p.letters(), true).second) continue;
      out.push_back(p);
      for (int v : set_vertices(rest.first_layer())) {
        std::vector<int> pl = p.letters();
        pl.push_back(v);
        std::vector<int> rl = rest.letters();
        rl.insert(rl.begin(), v);  // v . rest cancels the front letter
        stack.emplace_back(normalize(g, pl), normalize(g, rl));
      }
    }
    return out;
  };
  std::vector<std::array<NormalWord, 3>> out;
  for (const NormalWord& u1 : prefixes(w)) {
    NormalWord rest1 = multiply(inverse(u1), w);
    // clique-word prefixes are exactly the subsets of the first layer
    std::vector<int> fl = set_vertices(rest1.first_layer());
    for (VertexSet pick = 0; pick < (VertexSet{1} << fl.size()); ++pick) {
      std::vector<int> mid;
      for (std::size_t i = 0; i < fl.size(); ++i)
        if ((pick >> i) & 1) mid.push_back(fl[i]);
      NormalWord u2 = normalize(g, mid);
      if (!g.is_clique(u2.support())) continue;
      NormalWord u3 = multiply(inverse(u2), rest1);
      if (u1.length() + u2.length() + u3.length() != w.length()) continue;
      out.push_back({u1, u2, u3});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    for (int i = 0; i < 3; ++i) {
      if (a[i] < b[i]) return true;
      if (b[i] < a[i]) return false;
    }
    return false;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const auto& a, const auto& b) {
                          return a[0] == b[0] && a[1] == b[1] && a[2] == b[2];
                        }),
            out.end());
  return out;
}

}  // namespace gpf
