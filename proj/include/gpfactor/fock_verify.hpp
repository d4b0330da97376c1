#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "gpfactor/fock.hpp"

namespace gpf {

// Outcome of one randomized identity check.
struct VerifyReport {
  std::string identity;
  int trials = 0;
  double max_residual = 0.0;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  long long dimension = 0;
  int depth = 0;
  bool pass() const { return max_residual < tol; }
};

namespace fock_detail {

inline std::vector<NormalWord> space_words(const TruncatedFockSpace& sp) {
  std::vector<NormalWord> out;
  for (int i = 0; i < sp.block_count(); ++i) out.push_back(sp.block(i).word);
  return out;
}

inline std::vector<Vec> random_legs(const TruncatedFockSpace& sp,
                                    const NormalWord& w, Rng& rng) {
  std::vector<Vec> elems;
  for (int v : w.letters()) elems.push_back(sp.model(v).random_centered(rng));
  return elems;
}

inline OperatorRep word_operator(const TruncatedFockSpace& sp, const NormalWord& w,
                                 const std::vector<Vec>& elems) {
  return reduced_operator(sp, w.letters(), elems);
}

inline double vec_residual(const Vec& a, const Vec& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace fock_detail

// Conditional expectation of a triple a1 a2 a3 with a1 over u^-1, a2 over a
// word of the first subgraph, a3 over u', where u,u' avoid first-subgraph
// letters at the start and second-subgraph letters at the end: the
// expectation onto the second subgraph is phi(a1 a3) a2 when u^-1 w u' stays
// inside it and 0 otherwise.
inline VerifyReport verify_expectation_triple(const TruncatedFockSpace& sp,
                                              VertexSet g1, VertexSet g2,
                                              int trials, std::uint64_t seed,
                                              double tol) {
  const SimpleGraph& g = sp.graph();
  g.check_subset(g1);
  g.check_subset(g2);
  Rng rng(seed);
  VerifyReport rep{"expectation_of_triple", 0, 0.0, tol, seed, sp.dim(), sp.depth()};
  std::vector<NormalWord> ws, us;
  for (const NormalWord& w : fock_detail::space_words(sp)) {
    if ((w.support() & ~g1) == 0) ws.push_back(w);
    if ((possible_first_letters(w) & g1) == 0 &&
        (possible_last_letters(w) & g2) == 0)
      us.push_back(w);
  }
  const Mat e2 = projection_onto_subgroup(sp, g2).mat;
  const Vec vac = sp.vacuum();
  for (int t = 0; t < trials; ++t) {
    NormalWord u, w, u2;
    for (int tries = 0;; ++tries) {
      u = us[rng.below(static_cast<int>(us.size()))];
      w = ws[rng.below(static_cast<int>(ws.size()))];
      u2 = (rng.below(2) == 0) ? u : us[rng.below(static_cast<int>(us.size()))];
      if (u.length() + w.length() + u2.length() <= sp.depth()) break;
      if (tries > 200) {
        u = NormalWord(g);
        w = NormalWord(g);
        u2 = NormalWord(g);
        break;
      }
    }
    OperatorRep a1 = fock_detail::word_operator(sp, inverse(u),
                                                fock_detail::random_legs(sp, inverse(u), rng));
    OperatorRep a2 = fock_detail::word_operator(sp, w,
                                                fock_detail::random_legs(sp, w, rng));
    OperatorRep a3 = fock_detail::word_operator(sp, u2,
                                                fock_detail::random_legs(sp, u2, rng));
    Vec lhs = e2 * (a1.mat * (a2.mat * (a3.mat * vac)));
    NormalWord conj = multiply(inverse(u), multiply(w, u2));
    bool inside = (conj.support() & ~g2) == 0;
    Vec rhs = Vec::Zero(sp.dim());
    if (inside) {
      Cplx phi13 = (a1.mat * (a3.mat * vac))(0);
      rhs = phi13 * (a2.mat * vac);
    }
    rep.max_residual = std::max(rep.max_residual, fock_detail::vec_residual(lhs, rhs));
    ++rep.trials;
  }
  return rep;
}

// Iterated expectation identity: E_2(a* E_1(x) b) equals
// phi(ac* bc) ar* E_{1 meet 2 meet Link(uc)}(al* x bl) br for factorized a, b.
inline VerifyReport verify_iterated_expectation(const TruncatedFockSpace& sp,
                                                VertexSet g1, VertexSet g2,
                                                int trials, std::uint64_t seed,
                                                double tol) {
  const SimpleGraph& g = sp.graph();
  g.check_subset(g1);
  g.check_subset(g2);
  Rng rng(seed);
  VerifyReport rep{"iterated_expectation", 0, 0.0, tol, seed, sp.dim(), sp.depth()};
  std::vector<NormalWord> centers, lefts, rights, all;
  for (const NormalWord& w : fock_detail::space_words(sp)) {
    all.push_back(w);
    if ((possible_first_letters(w) & g1) == 0 &&
        (possible_last_letters(w) & g2) == 0)
      centers.push_back(w);
    if ((w.support() & ~g1) == 0) lefts.push_back(w);
    if ((w.support() & ~g2) == 0) rights.push_back(w);
  }
  const Mat e2 = projection_onto_subgroup(sp, g2).mat;
  const Vec vac = sp.vacuum();
  auto reduced_triple = [&](const NormalWord& l, const NormalWord& c,
                            const NormalWord& r) {
    return multiply(l, multiply(c, r)).length() ==
           l.length() + c.length() + r.length();
  };
  for (int t = 0; t < trials; ++t) {
    NormalWord ul, uc, ur, vl, vc, vr;
    int budget = 0;
    for (int tries = 0;; ++tries) {
      uc = centers[rng.below(static_cast<int>(centers.size()))];
      vc = (rng.below(2) == 0) ? uc : centers[rng.below(static_cast<int>(centers.size()))];
      ul = lefts[rng.below(static_cast<int>(lefts.size()))];
      vl = lefts[rng.below(static_cast<int>(lefts.size()))];
      ur = rights[rng.below(static_cast<int>(rights.size()))];
      vr = rights[rng.below(static_cast<int>(rights.size()))];
      int lu = ul.length() + uc.length() + ur.length();
      int lv = vl.length() + vc.length() + vr.length();
      budget = sp.depth() - lu - lv;
      if (budget >= 0 && reduced_triple(ul, uc, ur) && reduced_triple(vl, vc, vr))
        break;
      if (tries > 500) {
        ul = uc = ur = vl = vc = vr = NormalWord(g);
        budget = sp.depth();
        break;
      }
    }
    Expansion x;
    x.scalar = rng.uniform_pm1();
    int nterms = 1 + rng.below(3);
    for (int k = 0; k < nterms; ++k) {
      const NormalWord& z = all[rng.below(static_cast<int>(all.size()))];
      if (z.length() > budget) continue;
      ReducedTerm term;
      term.letters = z.letters();
      term.coeff = rng.uniform_pm1();
      for (int v : term.letters) term.elems.push_back(sp.model(v).random_centered(rng));
      if (!term.letters.empty()) x.terms.push_back(std::move(term));
    }
    auto op = [&](const NormalWord& w) {
      return fock_detail::word_operator(sp, w, fock_detail::random_legs(sp, w, rng)).mat;
    };
    Mat al = op(ul), ac = op(uc), ar = op(ur);
    Mat bl = op(vl), bc = op(vc), br = op(vr);
    Mat a = al * ac * ar;
    Mat b = bl * bc * br;
    Mat xm = expansion_matrix(sp, x).mat;
    Mat e1x = expansion_matrix(sp, conditional_expectation(sp, x, g1)).mat;
    Vec lhs = e2 * (a.adjoint() * (e1x * (b * vac)));
    VertexSet q = g1 & g2 & link_of_word(uc);
    Mat eq = projection_onto_subgroup(sp, q).mat;
    Vec inner_vec = eq * (al.adjoint() * (xm * (bl * vac)));
    Mat inner = expansion_matrix(sp, element_from_vector(sp, inner_vec)).mat;
    Cplx phi_cb = (ac.adjoint() * (bc * vac))(0);
    Vec rhs = phi_cb * (ar.adjoint() * (inner * (br * vac)));
    rep.max_residual = std::max(rep.max_residual, fock_detail::vec_residual(lhs, rhs));
    ++rep.trials;
  }
  return rep;
}

// Commutator of a vertex operator with a conjugated one: vanishes on words
// leaving the star of the vertex and restricts to the star block as the
// commutator of the star subproduct; cross-vertex commutators vanish.
inline VerifyReport verify_commutator_star(const TruncatedFockSpace& sp, int v,
                                           int trials, std::uint64_t seed,
                                           double tol) {
  const SimpleGraph& g = sp.graph();
  if (v < 0 || v >= g.size()) throw input_error("unknown vertex");
  Rng rng(seed);
  VerifyReport rep{"commutator_star", 0, 0.0, tol, seed, sp.dim(), sp.depth()};
  VertexSet star = g.star(v);
  SimpleGraph sub_graph = g.induced(star);
  std::vector<VertexModel> sub_models;
  for (int w : set_vertices(star)) sub_models.push_back(sp.model(w));
  TruncatedFockSpace sub(sub_graph, sub_models, sp.depth(), sp.dim());
  int v_sub = sub_graph.index_of(g.id(v));
  // embedding of the star block into the ambient space
  std::vector<long long> embed(sub.dim());
  for (int bi = 0; bi < sub.block_count(); ++bi) {
    const WordBlock& b = sub.block(bi);
    std::vector<int> letters;
    for (int l : b.legs) letters.push_back(g.index_of(sub_graph.id(l)));
    Realization real = Realization::of(g, letters);
    int pb = sp.block_of(real.word.letters());
    fock_detail::for_each_column(sub, bi, [&](long long idx, const std::vector<int>& vals) {
      std::vector<int> tv(vals.size());
      for (std::size_t i = 0; i < vals.size(); ++i) tv[real.position[i]] = vals[i];
      embed[idx] = sp.index(pb, tv);
    });
  }
  ModularConjugation J(sp);
  ModularConjugation J_sub(sub);
  for (int t = 0; t < trials; ++t) {
    Mat a = sp.model(v).random_operator(rng);
    Mat b = sp.model(v).random_operator(rng);
    Mat A = lambda_vertex_op(sp, v, a).mat;
    Mat JbJ = J.conjugate(lambda_vertex_op(sp, v, b).mat);
    Mat C = A * JbJ - JbJ * A;
    Mat As = lambda_vertex_op(sub, v_sub, a).mat;
    Mat JbJs = J_sub.conjugate(lambda_vertex_op(sub, v_sub, b).mat);
    Mat Cs = As * JbJs - JbJs * As;
    // columns outside the star: commutator must vanish
    for (int bi = 0; bi < sp.block_count(); ++bi) {
      const WordBlock& blk = sp.block(bi);
      if (blk.word.length() > sp.depth() - 2) continue;
      if ((blk.word.support() & ~star) == 0) continue;
      for (long long c = 0; c < blk.size; ++c)
        rep.max_residual = std::max(
            rep.max_residual, C.col(blk.offset + c).cwiseAbs().maxCoeff());
    }
    // star block: the ambient commutator is the sub-product commutator
    for (int bi = 0; bi < sub.block_count(); ++bi) {
      const WordBlock& blk = sub.block(bi);
      if (blk.word.length() > sub.depth() - 2) continue;
      for (long long c = 0; c < blk.size; ++c) {
        Vec expect = Vec::Zero(sp.dim());
        for (long long r = 0; r < sub.dim(); ++r)
          expect(embed[r]) = Cs(r, blk.offset + c);
        rep.max_residual = std::max(
            rep.max_residual,
            fock_detail::vec_residual(C.col(embed[blk.offset + c]), expect));
      }
    }
    // cross-vertex commutators vanish identically
    if (g.size() > 1) {
      int w = rng.below(g.size() - 1);
      if (w >= v) ++w;
      Mat B2 = lambda_vertex_op(sp, w, sp.model(w).random_operator(rng)).mat;
      Mat C2 = A * J.conjugate(B2) - J.conjugate(B2) * A;
      for (int bi = 0; bi < sp.block_count(); ++bi) {
        const WordBlock& blk = sp.block(bi);
        if (blk.word.length() > sp.depth() - 2) continue;
        for (long long c = 0; c < blk.size; ++c)
          rep.max_residual = std::max(
              rep.max_residual, C2.col(blk.offset + c).cwiseAbs().maxCoeff());
      }
    }
    ++rep.trials;
  }
  return rep;
}

}  // namespace gpf
