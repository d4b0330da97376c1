#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gpfactor/errors.hpp"
#include "gpfactor/tri_state.hpp"

namespace gpf {

// Hecke parameter q in (0,1] of a 2-dimensional algebra with state weights
// (alpha, 1-alpha), and back. alpha = 1/2 corresponds to q = 1.
inline double alpha_from_hecke_q(double q) {
  double p = (q - 1.0) / std::sqrt(q);
  return 0.5 * (1.0 + std::sqrt(1.0 - 4.0 / (p * p + 4.0)));
}

inline double hecke_q_from_alpha(double alpha) {
  double p2 = 1.0 / (alpha * (1.0 - alpha)) - 4.0;
  double p = -std::sqrt(std::max(p2, 0.0));
  double sq = 0.5 * (p + std::sqrt(p * p + 4.0));
  return sq * sq;
}

// Per-vertex metadata record. dimension nullopt means infinite. Flags are
// tri-state; derive() closes them under the implications that hold for
// tracial von Neumann algebras and reports contradictions.
struct VertexAlgebra {
  std::optional<long long> dimension;  // nullopt = infinite
  TriState amenable = TriState::unknown("not specified");
  TriState atomic = TriState::unknown("not specified");
  TriState diffuse = TriState::unknown("not specified");
  TriState strongly_solid = TriState::unknown("not specified");
  TriState is_factor = TriState::unknown("not specified");
  TriState is_II1_factor = TriState::unknown("not specified");
  TriState prime = TriState::unknown("not specified");
  TriState has_trace_zero_unitary = TriState::unknown("not specified");
  TriState separable_predual = TriState::unknown("not specified");
  TriState strong_AO = TriState::unknown("not specified");
  TriState in_C_vertex = TriState::unknown("not specified");
  std::optional<double> hecke_q;       // present => dimension 2
  std::optional<double> two_dim_alpha; // state weight of a 2-dim algebra

  bool finite_dimensional() const { return dimension.has_value(); }

  static VertexAlgebra hecke(double q) {
    if (!(q > 0.0) || q > 1.0) throw input_error("hecke q must lie in (0,1]");
    VertexAlgebra a;
    a.hecke_q = q;
    a.derive();
    return a;
  }

  static VertexAlgebra two_dim(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
      throw input_error("two_dim alpha must lie in (0,1)");
    VertexAlgebra a;
    a.two_dim_alpha = alpha;
    a.derive();
    return a;
  }

  // Full matrix algebra of size n with its normalized trace.
  static VertexAlgebra matrix(int n) {
    if (n < 2) throw input_error("matrix size must be at least 2 (no scalars)");
    VertexAlgebra a;
    a.dimension = static_cast<long long>(n) * n;
    a.is_factor = TriState::yes("matrix algebra");
    a.prime = TriState::unknown("finite type I factor: primeness as defined needs a II1 factor");
    a.has_trace_zero_unitary =
        TriState::yes("diag(1,-1,...) has normalized trace 0 for n >= 2");
    a.derive();
    return a;
  }

  static VertexAlgebra II1_factor() {
    VertexAlgebra a;
    a.is_II1_factor = TriState::yes("declared II1 factor");
    a.separable_predual = TriState::yes("assumed for declared II1 factors");
    a.derive();
    return a;
  }

  static VertexAlgebra C_vertex() {
    VertexAlgebra a;
    a.in_C_vertex = TriState::yes("declared in the vertex class");
    a.separable_predual = TriState::yes("vertex class");
    a.derive();
    return a;
  }

  void derive() {
    for (int round = 0; round < 8; ++round) {
      bool changed = false;
      auto set = [&](TriState& slot, Verdict v, const std::string& why) {
        if (slot.verdict == v) return;
        if (slot.decisive())
          throw input_error("contradictory descriptor: " + why +
                            " conflicts with explicit '" + slot.why + "'");
        slot = {v, why};
        changed = true;
      };

      if (hecke_q && !two_dim_alpha) {
        two_dim_alpha = alpha_from_hecke_q(*hecke_q);
        changed = true;
      }
      if (two_dim_alpha && !hecke_q) {
        hecke_q = hecke_q_from_alpha(*two_dim_alpha);
        changed = true;
      }
      if (hecke_q) {
        if (dimension && *dimension != 2)
          throw input_error("hecke vertex must be 2-dimensional");
        if (!dimension) {
          dimension = 2;
          changed = true;
        }
      }
      if (two_dim_alpha) {
        bool balanced = std::abs(*two_dim_alpha - 0.5) < 1e-12;
        set(has_trace_zero_unitary, balanced ? Verdict::Yes : Verdict::No,
            balanced ? "2-dim with alpha = 1/2 (|tau(u)| >= |2a-1|)"
                     : "2-dim with alpha != 1/2 (|tau(u)| >= |2a-1| > 0)");
      }
      if (dimension) {
        if (*dimension < 2) throw input_error("scalar vertex algebras are excluded");
        set(amenable, Verdict::Yes, "finite-dimensional");
        set(atomic, Verdict::Yes, "finite-dimensional");
        set(diffuse, Verdict::No, "finite-dimensional");
        set(is_II1_factor, Verdict::No, "finite-dimensional");
      }
      if (diffuse.is_yes() && dimension)
        throw input_error("diffuse algebra cannot be finite-dimensional");
      if (is_II1_factor.is_yes()) {
        set(diffuse, Verdict::Yes, "II1 factor");
        set(is_factor, Verdict::Yes, "II1 factor");
      }
      if (diffuse.is_yes()) {
        set(atomic, Verdict::No, "diffuse");
        set(has_trace_zero_unitary, Verdict::Yes, "diffuse algebras contain a Haar unitary");
      }
      if (atomic.is_yes()) set(diffuse, Verdict::No, "atomic");
      if (diffuse.is_no() && !dimension)
        set(strongly_solid, Verdict::Yes, "not diffuse: no diffuse subalgebras");
      if (amenable.is_yes())
        set(strongly_solid, Verdict::Yes, "amenable algebras are strongly solid");
      if (dimension)
        set(strongly_solid, Verdict::Yes, "finite-dimensional: not diffuse");
      if (in_C_vertex.is_yes()) {
        set(amenable, Verdict::No, "vertex class is non-amenable");
        set(is_II1_factor, Verdict::Yes, "vertex class");
        set(strong_AO, Verdict::Yes, "vertex class");
        set(separable_predual, Verdict::Yes, "vertex class");
        set(prime, Verdict::Yes, "vertex-class factors are solid and prime");
      }
      if (strong_AO.is_yes() && amenable.is_no() && is_II1_factor.is_yes() &&
          separable_predual.is_yes())
        set(in_C_vertex, Verdict::Yes,
            "strong (AO), non-amenable II1 factor with separable predual");
      if (amenable.is_yes() || is_II1_factor.is_no() || strong_AO.is_no() ||
          separable_predual.is_no())
        set(in_C_vertex, Verdict::No, "vertex-class membership requires "
            "strong (AO), non-amenability, II1 and separable predual");
      if (!changed) return;
    }
    throw input_error("descriptor derivation did not stabilize");
  }
};

}  // namespace gpf
