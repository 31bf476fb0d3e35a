#pragma once

// Self-adjoint vertex couplings of the square-lattice quantum graph.
//
// The canonical description is the ST form: a rank m in 0..4, a Hermitian
// m x m matrix S (dimension 1/length), a complex m x (4-m) matrix T and the
// edge length a.  The raw (A,B) pair of the boundary condition
// A Psi(0) + B Psi'(0) = 0 is derived from it; unitary (U) and
// projection/operator (P,L) encodings are accepted as inputs and converted.
//
// Edge slots follow the elementary-cell convention: slots 1,2 are the
// horizontal wave components (psi1, psi2), slots 3,4 the vertical ones
// (phi1, phi2).  st_to_ab_permuted exposes alternative numberings.

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlattice/types.hpp"

namespace qlattice {

class STCoupling {
 public:
  // S: m x m, only the upper triangle is stored (Hermitian completion is
  // implied); diagonal entries must be real.  T: m x (4-m).  a > 0.
  STCoupling(int m, const MatX& S, const MatX& T, double a) : m_(m), a_(a) {
    if (m < 0 || m > 4) throw std::invalid_argument("coupling rank m out of range 0..4");
    if (a <= 0.0) throw std::invalid_argument("edge length a must be positive");
    if (S.rows() != m || S.cols() != m) throw std::invalid_argument("S must be m x m");
    if (T.rows() != m || T.cols() != 4 - m) throw std::invalid_argument("T must be m x (4-m)");
    s_upper_ = MatX::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      if (std::abs(S(i, i).imag()) > 1e-12)
        throw std::invalid_argument("diagonal of S must be real");
      s_upper_(i, i) = cplx(S(i, i).real(), 0.0);
      for (int j = i + 1; j < m; ++j) s_upper_(i, j) = S(i, j);
    }
    t_ = T;
  }

  int m() const { return m_; }
  double a() const { return a_; }
  const MatX& T() const { return t_; }

  // Hermitian completion of the stored upper triangle.
  MatX S() const {
    MatX s = s_upper_;
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < i; ++j) s(i, j) = std::conj(s_upper_(j, i));
    return s;
  }

  cplx s(int i, int j) const {
    if (i <= j) return s_upper_(i, j);
    return std::conj(s_upper_(j, i));
  }
  cplx t(int i, int j) const { return t_(i, j); }

 private:
  int m_;
  double a_;
  MatX s_upper_;
  MatX t_;
};

struct ABCoupling {
  Mat4 A, B;
};

// ---------------------------------------------------------------------------
// validation

struct ValidationReport {
  int rank_ab = 0;                 // rank of the 4x8 block (A|B)
  int rank_b = 0;                  // the m that routes the case analysis
  double hermiticity_defect = 0.0; // max |(AB*) - (AB*)^H| entrywise
  double sv_threshold = 0.0;

  bool rank_ok() const { return rank_ab == 4; }
  bool hermitian_ok() const { return hermiticity_defect <= 1e-12; }
  bool ok() const { return rank_ok() && hermitian_ok(); }

  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    if (!rank_ok()) out.push_back("(A|B) does not have maximum rank");
    if (!hermitian_ok()) out.push_back("A B* is not Hermitian");
    return out;
  }
};

namespace detail {
inline int numeric_rank(const MatX& m, double rel_tol = 1e-10) {
  Eigen::JacobiSVD<MatX> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double thr = rel_tol * sv(0);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thr) ++r;
  return r;
}
}  // namespace detail

inline ValidationReport validate_ab(const Mat4& A, const Mat4& B) {
  ValidationReport r;
  MatX ab(4, 8);
  ab << A, B;
  r.rank_ab = detail::numeric_rank(ab);
  r.rank_b = detail::numeric_rank(B);
  Eigen::JacobiSVD<MatX> svd(ab);
  r.sv_threshold = svd.singularValues().size() ? 1e-10 * svd.singularValues()(0) : 0.0;
  const Mat4 h = A * B.adjoint();
  r.hermiticity_defect = (h - h.adjoint()).cwiseAbs().maxCoeff();
  return r;
}

// ---------------------------------------------------------------------------
// conversions

// Block form:  -A = [[S, 0], [-T*, I]],  B = [[I, T], [0, 0]].
inline ABCoupling st_to_ab(const STCoupling& c) {
  const int m = c.m();
  Mat4 A = Mat4::Zero(), B = Mat4::Zero();
  const MatX S = c.S();
  const MatX& T = c.T();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) A(i, j) = -S(i, j);
    B(i, i) = 1.0;
    for (int j = 0; j < 4 - m; ++j) B(i, m + j) = T(i, j);
  }
  for (int i = 0; i < 4 - m; ++i) {
    A(m + i, m + i) = -1.0;
    for (int j = 0; j < m; ++j) A(m + i, j) = std::conj(T(j, i));
  }
  return {A, B};
}

// Same coupling with the four edge slots renumbered: column j of A and B is
// moved to column perm[j].  perm must be a bijection on {0,1,2,3}.
inline ABCoupling st_to_ab_permuted(const STCoupling& c, const std::array<int, 4>& perm) {
  std::array<bool, 4> seen{};
  for (int p : perm) {
    if (p < 0 || p > 3 || seen[p]) throw std::invalid_argument("perm is not a permutation of 0..3");
    seen[p] = true;
  }
  const ABCoupling ab = st_to_ab(c);
  ABCoupling out;
  out.A = Mat4::Zero();
  out.B = Mat4::Zero();
  for (int j = 0; j < 4; ++j) {
    out.A.col(perm[j]) = ab.A.col(j);
    out.B.col(perm[j]) = ab.B.col(j);
  }
  return out;
}

// (U - I) Psi(0) + i (U + I) Psi'(0) = 0 with unitary U.
inline ABCoupling ab_from_unitary(const Mat4& U) {
  const double defect = (U * U.adjoint() - Mat4::Identity()).cwiseAbs().maxCoeff();
  if (defect > 1e-10) throw std::invalid_argument("U is not unitary");
  return {U - Mat4::Identity(), iu * (U + Mat4::Identity())};
}

// P Psi(0) = 0,  Q Psi'(0) + L Q Psi(0) = 0 with Q = I - P and L self-adjoint
// on ran Q.  Combined single equation: (P + LQ) Psi(0) + Q Psi'(0) = 0.
inline ABCoupling ab_from_projection(const Mat4& P, const Mat4& L) {
  const double proj_defect = (P * P - P).cwiseAbs().maxCoeff() +
                             (P - P.adjoint()).cwiseAbs().maxCoeff();
  if (proj_defect > 1e-10) throw std::invalid_argument("P is not an orthogonal projection");
  const Mat4 Q = Mat4::Identity() - P;
  const Mat4 LQ = Q * L * Q;
  if ((LQ - LQ.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("L is not self-adjoint on ran Q");
  return {P + LQ * Q, Q};
}

// ---------------------------------------------------------------------------
// named couplings

enum class CouplingTag {
  Dirichlet,
  Delta,
  DeltaPrimeS,
  DeltaPrime,
  Kirchhoff,
  ScaleInvariant,
  DiagonalDecoupled,
  Generic,
};

struct CouplingClass {
  CouplingTag tag = CouplingTag::Generic;
  std::vector<double> params;
};

inline const char* coupling_tag_name(CouplingTag t) {
  switch (t) {
    case CouplingTag::Dirichlet: return "dirichlet";
    case CouplingTag::Delta: return "delta";
    case CouplingTag::DeltaPrimeS: return "delta-prime-s";
    case CouplingTag::DeltaPrime: return "delta-prime";
    case CouplingTag::Kirchhoff: return "kirchhoff";
    case CouplingTag::ScaleInvariant: return "scale-invariant";
    case CouplingTag::DiagonalDecoupled: return "diagonal";
    case CouplingTag::Generic: return "generic";
  }
  return "generic";
}

inline std::optional<CouplingTag> coupling_tag_from_name(const std::string& name) {
  for (CouplingTag t : {CouplingTag::Dirichlet, CouplingTag::Delta, CouplingTag::DeltaPrimeS,
                        CouplingTag::DeltaPrime, CouplingTag::Kirchhoff, CouplingTag::ScaleInvariant,
                        CouplingTag::DiagonalDecoupled, CouplingTag::Generic})
    if (name == coupling_tag_name(t)) return t;
  return std::nullopt;
}

namespace detail {
inline void expect_params(const CouplingClass& c, std::size_t n, const char* what) {
  if (c.params.size() != n)
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(n) +
                                " parameter(s), got " + std::to_string(c.params.size()));
}
}  // namespace detail

inline STCoupling preset(const CouplingClass& cls, double a = 1.0) {
  using detail::expect_params;
  switch (cls.tag) {
    case CouplingTag::Dirichlet: {
      return STCoupling(0, MatX::Zero(0, 0), MatX::Zero(0, 4), a);
    }
    case CouplingTag::Kirchhoff: {
      return preset({CouplingTag::Delta, {0.0}}, a);
    }
    case CouplingTag::Delta: {
      expect_params(cls, 1, "delta");
      MatX S(1, 1);
      S(0, 0) = cls.params[0];
      MatX T = MatX::Ones(1, 3);
      return STCoupling(1, S, T, a);
    }
    case CouplingTag::DeltaPrimeS: {
      expect_params(cls, 1, "delta-prime-s");
      const double beta = cls.params[0];
      if (beta == 0.0) throw std::invalid_argument("delta-prime-s: strength beta must be nonzero");
      MatX S = MatX::Constant(4, 4, cplx(1.0 / beta, 0.0));
      return STCoupling(4, S, MatX::Zero(4, 0), a);
    }
    case CouplingTag::DeltaPrime: {
      expect_params(cls, 1, "delta-prime");
      const double beta = cls.params[0];
      if (beta == 0.0) throw std::invalid_argument("delta-prime: strength beta must be nonzero");
      // S = (4I - J)/beta, J the all-ones matrix
      MatX S = MatX::Constant(4, 4, cplx(-1.0 / beta, 0.0));
      for (int i = 0; i < 4; ++i) S(i, i) = cplx(3.0 / beta, 0.0);
      return STCoupling(4, S, MatX::Zero(4, 0), a);
    }
    case CouplingTag::DiagonalDecoupled: {
      expect_params(cls, 4, "diagonal");
      MatX S = MatX::Zero(4, 4);
      for (int i = 0; i < 4; ++i) S(i, i) = cls.params[i];
      return STCoupling(4, S, MatX::Zero(4, 0), a);
    }
    case CouplingTag::ScaleInvariant: {
      // parameters: m followed by the re,im pairs of T in row-major order
      if (cls.params.empty()) throw std::invalid_argument("scale-invariant: missing rank parameter");
      const int m = static_cast<int>(cls.params[0]);
      if (m < 1 || m > 4) throw std::invalid_argument("scale-invariant: rank must be 1..4");
      const std::size_t nt = static_cast<std::size_t>(m) * (4 - m);
      expect_params({cls.tag, cls.params}, 1 + 2 * nt, "scale-invariant");
      MatX T(m, 4 - m);
      for (std::size_t e = 0; e < nt; ++e)
        T(static_cast<int>(e) / (4 - m), static_cast<int>(e) % (4 - m)) =
            cplx(cls.params[1 + 2 * e], cls.params[2 + 2 * e]);
      return STCoupling(m, MatX::Zero(m, m), T, a);
    }
    case CouplingTag::Generic:
      throw std::invalid_argument("generic couplings have no preset; pass S and T explicitly");
  }
  throw std::invalid_argument("unknown coupling preset");
}

inline CouplingClass classify_coupling(const STCoupling& c) {
  constexpr double tol = 1e-12;
  const int m = c.m();
  const MatX S = c.S();
  const MatX& T = c.T();

  if (m == 0) return {CouplingTag::Dirichlet, {}};

  if (m == 1 && (T - MatX::Ones(1, 3)).cwiseAbs().maxCoeff() <= tol) {
    const double s = S(0, 0).real();
    if (std::abs(s) <= tol) return {CouplingTag::Kirchhoff, {}};
    return {CouplingTag::Delta, {s}};
  }

  if (m == 4) {
    bool all_equal = true;
    const cplx s0 = S(0, 0);
    for (int i = 0; i < 4 && all_equal; ++i)
      for (int j = 0; j < 4; ++j)
        if (std::abs(S(i, j) - s0) > tol) {
          all_equal = false;
          break;
        }
    if (all_equal && std::abs(s0) > tol)
      return {CouplingTag::DeltaPrimeS, {1.0 / s0.real()}};

    bool diagonal = true;
    for (int i = 0; i < 4 && diagonal; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j && std::abs(S(i, j)) > tol) {
          diagonal = false;
          break;
        }
    if (diagonal)
      return {CouplingTag::DiagonalDecoupled,
              {S(0, 0).real(), S(1, 1).real(), S(2, 2).real(), S(3, 3).real()}};

    // (4I - J)/beta pattern
    const cplx off = S(0, 1);
    if (std::abs(off) > tol) {
      bool dp = true;
      for (int i = 0; i < 4 && dp; ++i)
        for (int j = 0; j < 4; ++j) {
          const cplx want = (i == j) ? -3.0 * off : off;
          if (std::abs(S(i, j) - want) > tol * (1.0 + std::abs(off))) {
            dp = false;
            break;
          }
        }
      if (dp && std::abs(off.imag()) <= tol && off.real() < 0.0)
        return {CouplingTag::DeltaPrime, {-1.0 / off.real()}};
    }
  }

  if (S.size() > 0 && S.cwiseAbs().maxCoeff() <= tol) {
    CouplingClass cls{CouplingTag::ScaleInvariant, {static_cast<double>(m)}};
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < 4 - m; ++j) {
        cls.params.push_back(T(i, j).real());
        cls.params.push_back(T(i, j).imag());
      }
    return cls;
  }

  return {CouplingTag::Generic, {}};
}

}  // namespace qlattice
