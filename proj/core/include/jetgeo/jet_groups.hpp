#pragma once

#include <functional>
#include <span>

#include "jetgeo/errors.hpp"
#include "jetgeo/grid.hpp"

namespace jetgeo {

enum class StructureKind { kRiemannian, kAffine };

/// 2-jet of a local diffeomorphism of R^n fixing the origin: a1(i,j) = a^i_j,
/// a2(i,j,k) = a^i_jk.
struct Jet2Element {
  Matrix a1;
  Tensor3 a2;

  Jet2Element() = default;
  /// Symmetrizes a2 over its lower pair.
  Jet2Element(Matrix first, Tensor3 second);

  int dim() const { return static_cast<int>(a1.rows()); }
  static Jet2Element identity(int n);
  /// Kernel element (I, k).
  static Jet2Element kernel(const Tensor3& k);
};

Jet2Element compose2(const Jet2Element& a, const Jet2Element& b);
Jet2Element inverse2(const Jet2Element& a);
Matrix project(const Jet2Element& a);
/// a1 -> (a1, 0).
Jet2Element split_epsilon(const Matrix& a1);

/// Max componentwise distance between two jets.
double jet_distance(const Jet2Element& a, const Jet2Element& b);

struct CosetInvariant {
  StructureKind kind = StructureKind::kRiemannian;
  Matrix F1;  // empty for the affine kind
  Tensor3 F2;
};

CosetInvariant coset_invariant(const Jet2Element& a, StructureKind kind = StructureKind::kRiemannian);

/// F(ab) from F(a) and b alone.
CosetInvariant coset_transport(const CosetInvariant& Fa, const Jet2Element& b);

// The transport formulas are written once over any scalar with + and *, so the
// same code handles numeric jets and the symbolic chart changes of geom_object.
template <class S>
Grid<S, 2> transport_first(const Grid<S, 2>& F1, const Grid<S, 2>& b1) {
  const int n = b1.dim();
  Grid<S, 2> out(n, S(0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      S acc(0.0);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) acc = acc + F1(a, b) * b1(a, i) * b1(b, j);
      out(i, j) = acc;
    }
  return out;
}

template <class S>
Grid<S, 3> transport_second(const Grid<S, 3>& F2, const Grid<S, 2>& b1, const Grid<S, 2>& b1inv,
                            const Grid<S, 3>& b2) {
  const int n = b1.dim();
  // t(s,j,k) = F2^s_tr b^t_j b^r_k + b^s_jk
  Grid<S, 3> t(n, S(0.0));
  for (int s = 0; s < n; ++s)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        S acc = b2(s, j, k);
        for (int p = 0; p < n; ++p)
          for (int r = 0; r < n; ++r) acc = acc + F2(s, p, r) * b1(p, j) * b1(r, k);
        t(s, j, k) = acc;
        t(s, k, j) = acc;
      }
  Grid<S, 3> out(n, S(0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        S acc(0.0);
        for (int s = 0; s < n; ++s) acc = acc + b1inv(i, s) * t(s, j, k);
        out(i, j, k) = acc;
        out(i, k, j) = acc;
      }
  return out;
}

Grid<double, 2> to_grid(const Matrix& m);
Matrix to_matrix(const Grid<double, 2>& g);

/// Recovers k with sigma(b) = (I,k) eps(b) (I,-k) from k = phi(lambda I)/(lambda^2 - lambda),
/// where sigma(b) = (b, phi(b)). Every sample is checked against the recovered
/// conjugation to `tol` (scaled by the sample's magnitude); a mismatch throws
/// VerificationError.
Tensor3 recover_conjugator(const std::function<Jet2Element(const Matrix&)>& sigma,
                           std::span<const Matrix> samples, double lambda, double tol = 1e-10);

/// 3-jet of a map of the line fixing 0.
struct Jet3Element1d {
  double a1 = 1.0;
  double a2 = 0.0;
  double a3 = 0.0;
  bool operator==(const Jet3Element1d&) const = default;
};

Jet3Element1d compose3_1d(const Jet3Element1d& a, const Jet3Element1d& b);
Jet3Element1d inverse3_1d(const Jet3Element1d& a);
/// The splitting G_2(1) -> G_3(1): (a1, a2) -> (a1, a2, 3/2 a2^2/a1).
Jet3Element1d split_epsilon3(double a1, double a2);

struct SchwarzianSplit {
  Jet3Element1d head;     // split_epsilon3(a1, a2)
  double schwarzian = 0;  // a3 - 3/2 a2^2/a1
  /// Kernel factor with compose3_1d(head, kernel()) == the original jet.
  Jet3Element1d kernel() const { return {1.0, 0.0, schwarzian / head.a1}; }
};

SchwarzianSplit split_schwarzian(const Jet3Element1d& a);

}  // namespace jetgeo
