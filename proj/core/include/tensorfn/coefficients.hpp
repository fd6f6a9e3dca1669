#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "tensorfn/errors.hpp"
#include "tensorfn/real.hpp"
#include "tensorfn/scalar_function.hpp"
#include "tensorfn/spectrum.hpp"

namespace tensorfn {

// Coefficients of the n-th spectral derivative
//
//   (1/n!) grad^(n) f(A) = sum f_{i1...i(n+1)} A_i1 [x] ... [x] A_i(n+1)
//
// are totally symmetric in their indices, so each one is fixed by how many times
// every eigenvalue label occurs. Three independent evaluation routes are provided:
// confluent divided differences (production), residues of the rational kernel, and
// the leading coefficient of a Hermite interpolant.

/// Multiplicities of the three eigenvalue labels inside a coefficient multi-index,
/// nu[l] = number of occurrences of alpha_l. The derivative order is sum(nu) - 1.
struct IndexClass {
  std::array<int, 3> nu{0, 0, 0};

  int order() const { return nu[0] + nu[1] + nu[2] - 1; }

  /// Multiplicities sorted ascending, e.g. (0, 1, n).
  std::array<int, 3> pattern() const {
    auto p = nu;
    std::sort(p.begin(), p.end());
    return p;
  }

  friend bool operator==(const IndexClass&, const IndexClass&) = default;
};

/// N(n) = floor(((n+4)^2 + 4)/12), the number of distinct multiplicity patterns.
int count_classes(int n);

/// All triples 0 <= I <= J <= K with I + J + K = n + 1, in lexicographic order.
std::vector<std::array<int, 3>> enumerate_classes(int n);

enum class CoeffMethod { divided_difference, residue, interpolation };

CoeffMethod parse_coeff_method(std::string_view name);
std::string to_string(CoeffMethod m);

namespace detail {

/// f[y_0, ..., y_j] for nodes clustered around c, from
/// f[...] = sum_{k >= j} f^(k)(c)/k! h_{k-j}(y - c), h the complete homogeneous
/// symmetric polynomial. Returns false if the series does not settle.
template <typename Real>
bool clustered_divided_difference(const ScalarFn& f, std::span<const Real> nodes, const Real& c,
                                  Real& out) {
  const int count = static_cast<int>(nodes.size());
  const int j = count - 1;
  std::vector<Real> y(count);
  for (int r = 0; r < count; ++r) y[r] = nodes[r] - c;

  // h[m] = h_s(y_0..y_(m-1)) for the current degree s.
  std::vector<Real> h(count + 1, Real(1));
  h[0] = Real(1);
  Real sum = f.taylor_coefficient(j, c) * h[count];

  const int degree = f.polynomial_degree();
  const int max_terms = degree >= 0 ? std::max(0, degree - j) : 600;
  int quiet = 0;
  for (int s = 1; s <= max_terms; ++s) {
    std::vector<Real> next(count + 1, Real(0));
    for (int m = 1; m <= count; ++m) next[m] = next[m - 1] + y[m - 1] * h[m];
    h.swap(next);
    const Real term = f.taylor_coefficient(j + s, c) * h[count];
    sum += term;
    if (degree < 0) {
      if (abs(term) <= epsilon<Real>() * abs(sum) / Real(4)) {
        if (++quiet >= 2) {
          out = sum;
          return true;
        }
      } else {
        quiet = 0;
      }
    }
  }
  out = sum;
  return degree >= 0;
}

}  // namespace detail

/// Confluent (Hermite) divided difference f[x_1, ..., x_(n+1)] from a Newton table.
///
/// Nodes are sorted so that every table entry covers a contiguous window. A window
/// of coincident nodes contributes f^(j)/j!; a window whose spread is small against
/// both the node magnitude and the Taylor radius of f is summed from the Taylor series
/// about its midpoint (this removes the cancellation of the plain recurrence for
/// nearly coincident nodes); every other entry uses the usual recurrence.
template <typename Real>
Real divided_difference(const ScalarFn& f, std::span<const Real> nodes) {
  if (nodes.empty()) throw ArgumentError("divided difference needs at least one node");
  std::vector<Real> z(nodes.begin(), nodes.end());
  std::sort(z.begin(), z.end());
  const int n = static_cast<int>(z.size());

  // Highest derivative order required: longest run of equal nodes minus one.
  int run = 1;
  int longest = 1;
  for (int i = 1; i < n; ++i) {
    run = (z[i] == z[i - 1]) ? run + 1 : 1;
    longest = std::max(longest, run);
  }
  if (longest - 1 > f.max_order()) {
    throw ArgumentError("node repeated " + std::to_string(longest) + " times needs f^(" +
                        std::to_string(longest - 1) + "), but " + f.spec() + " declares at most " +
                        std::to_string(f.max_order()));
  }

  // table[i] holds f[z_i .. z_(i+j)] for the current column j.
  std::vector<Real> table(n);
  for (int i = 0; i < n; ++i) table[i] = f.value(z[i]);
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i + j < n; ++i) {
      const Real spread = z[i + j] - z[i];
      if (spread == Real(0)) {
        table[i] = f.taylor_coefficient(j, z[i]);
        continue;
      }
      const Real mid = (z[i] + z[i + j]) / Real(2);
      const Real scale = std::max(Real(1), abs(mid));
      const Real radius = f.convergence_radius(mid);
      if (spread <= Real(0.1) * std::min(scale, radius)) {
        Real v;
        if (detail::clustered_divided_difference(
                f, std::span<const Real>(z.data() + i, static_cast<std::size_t>(j + 1)), mid, v)) {
          table[i] = v;
          continue;
        }
      }
      table[i] = (table[i + 1] - table[i]) / spread;
    }
  }
  return table[0];
}

/// Nodes multiset for a class: alpha_l repeated nu[l] times.
template <typename Real>
std::vector<Real> class_nodes(const IndexClass& cls, std::span<const Real> alphas) {
  std::vector<Real> nodes;
  for (int l = 0; l < 3; ++l) {
    if (cls.nu[l] < 0) throw ArgumentError("negative multiplicity in index class");
    if (cls.nu[l] == 0) continue;
    if (l >= static_cast<int>(alphas.size())) {
      throw ArgumentError("index class refers to an eigenvalue label that does not exist");
    }
    nodes.insert(nodes.end(), cls.nu[l], alphas[l]);
  }
  if (nodes.empty()) throw ArgumentError("index class is empty");
  return nodes;
}

namespace detail {

template <typename Real>
void require_distinct_labels(const IndexClass& cls, std::span<const Real> alphas) {
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      if (cls.nu[a] > 0 && cls.nu[b] > 0 && alphas[a] == alphas[b]) {
        throw ArgumentError("distinct eigenvalue labels carry coincident values; cluster first");
      }
    }
  }
}

}  // namespace detail

/// Sum of residues of f(z) / prod_l (z - alpha_l)^nu_l at the poles alpha_l, each
/// evaluated with the Leibniz rule from the Taylor jet of f and the exact Laurent
/// coefficients of the remaining rational factor.
template <typename Real>
Real coeff_residue(const ScalarFn& f, const IndexClass& cls, std::span<const Real> alphas) {
  (void)class_nodes(cls, alphas);
  detail::require_distinct_labels(cls, alphas);
  Real total(0);
  for (int l = 0; l < 3; ++l) {
    const int nu = cls.nu[l];
    if (nu == 0) continue;
    const int r = nu - 1;
    const std::vector<Real> fj = f.jet(alphas[l], r);
    // Taylor series of prod_{m != l} (x - alpha_m)^(-nu_m) about alpha_l.
    std::vector<Real> g(r + 1, Real(0));
    g[0] = Real(1);
    for (int m = 0; m < 3; ++m) {
      if (m == l || cls.nu[m] == 0) continue;
      const Real h = alphas[l] - alphas[m];
      const int num = cls.nu[m];
      // (h + t)^(-num) = sum_s (-1)^s C(num+s-1, s) h^(-num-s) t^s
      std::vector<Real> factor(r + 1);
      Real hp = Real(1) / detail::ipow(h, num);
      Real binom(1);
      for (int s = 0; s <= r; ++s) {
        factor[s] = ((s % 2 == 0) ? binom : -binom) * hp;
        binom = binom * Real(num + s) / Real(s + 1);
        hp /= h;
      }
      g = detail::jet_product(g, factor);
    }
    Real term(0);
    for (int s = 0; s <= r; ++s) term += fj[r - s] * g[s];
    total += term;
  }
  return total;
}

/// Largest condition number (after column equilibration) accepted by
/// coeff_interpolation, relative to machine epsilon: cond * eps must stay below 1e-6.
inline constexpr double kInterpolationConditionBudget = 1e-6;

/// Leading coefficient p_n of the degree-n Hermite interpolant matching f^(I)(alpha_l)
/// for 0 <= I < nu_l.
///
/// The node with the highest multiplicity is moved to the origin; its conditions fix
/// p_0 .. p_(nu-1) directly and the remaining unknowns solve a small confluent
/// Vandermonde system at the other nodes. Throws NumericalError when that system is
/// ill-conditioned.
template <typename Real>
Real coeff_interpolation(const ScalarFn& f, const IndexClass& cls, std::span<const Real> alphas) {
  (void)class_nodes(cls, alphas);
  detail::require_distinct_labels(cls, alphas);
  const int n = cls.order();
  int base = 0;
  for (int l = 1; l < 3; ++l) {
    if (cls.nu[l] > cls.nu[base]) base = l;
  }
  const Real c = alphas[base];
  const int fixed = cls.nu[base];
  std::vector<Real> p(n + 1, Real(0));
  for (int l = 0; l < fixed; ++l) p[l] = f.taylor_coefficient(l, c);
  const int unknowns = n + 1 - fixed;
  if (unknowns == 0) return p[n];

  using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  Mat m(unknowns, unknowns);
  Vec rhs(unknowns);
  int row = 0;
  for (int node = 0; node < 3; ++node) {
    if (node == base || cls.nu[node] == 0) continue;
    const Real h = alphas[node] - c;
    for (int l = 0; l < cls.nu[node]; ++l) {
      // (1/l!) P^(l)(h) = sum_k p_k C(k, l) h^(k-l)
      Real known(0);
      for (int k = l; k < fixed; ++k) known += p[k] * detail::binomial(Real(k), l) * detail::ipow(h, k - l);
      for (int col = 0; col < unknowns; ++col) {
        const int k = fixed + col;
        m(row, col) = k >= l ? detail::binomial(Real(k), l) * detail::ipow(h, k - l) : Real(0);
      }
      rhs(row) = f.taylor_coefficient(l, alphas[node]) - known;
      ++row;
    }
  }

  Vec col_scale(unknowns);
  for (int col = 0; col < unknowns; ++col) {
    Real s = m.col(col).cwiseAbs().maxCoeff();
    if (s == Real(0)) throw NumericalError("singular Hermite interpolation system");
    col_scale(col) = s;
    m.col(col) /= s;
  }
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  const Real smallest = sv(sv.size() - 1);
  if (smallest == Real(0) || sv(0) / smallest * epsilon<Real>() > Real(kInterpolationConditionBudget)) {
    throw NumericalError("ill-conditioned Hermite interpolation system (condition " +
                         std::to_string(static_cast<double>(sv(0) / smallest)) + ")");
  }
  const Vec sol = m.fullPivLu().solve(rhs);
  return sol(unknowns - 1) / col_scale(unknowns - 1);
}

template <typename Real>
Real coeff_divided_difference(const ScalarFn& f, const IndexClass& cls, std::span<const Real> alphas) {
  const auto nodes = class_nodes(cls, alphas);
  return divided_difference(f, std::span<const Real>(nodes));
}

template <typename Real>
Real coefficient(const ScalarFn& f, const IndexClass& cls, std::span<const Real> alphas,
                 CoeffMethod method = CoeffMethod::divided_difference) {
  switch (method) {
    case CoeffMethod::divided_difference:
      return coeff_divided_difference(f, cls, alphas);
    case CoeffMethod::residue:
      return coeff_residue(f, cls, alphas);
    case CoeffMethod::interpolation:
      return coeff_interpolation(f, cls, alphas);
  }
  throw ArgumentError("unknown coefficient method");
}

/// Every coefficient of one derivative order over one spectrum, keyed by label counts.
template <typename Real>
class BasicCoeffTable {
 public:
  struct Entry {
    std::vector<int> index;  ///< sorted multi-index over 0..d-1, length n+1
    Real value;
  };

  BasicCoeffTable(int order, int d) : order_(order), d_(d), values_(stride() * stride(), Real(0)) {
    if (order < 0) throw ArgumentError("derivative order must be non-negative");
    if (d < 1 || d > 3) throw ArgumentError("eigen-index must be 1..3");
  }

  int order() const { return order_; }
  int d() const { return d_; }

  /// Label counts (c0, c1, c2) with c0 + c1 + c2 = n + 1 and c_l = 0 for l >= d.
  std::vector<std::array<int, 3>> count_vectors() const {
    std::vector<std::array<int, 3>> out;
    const int total = order_ + 1;
    for (int c0 = total; c0 >= 0; --c0) {
      for (int c1 = total - c0; c1 >= 0; --c1) {
        const int c2 = total - c0 - c1;
        if ((d_ < 2 && c1 > 0) || (d_ < 3 && c2 > 0)) continue;
        out.push_back({c0, c1, c2});
      }
    }
    return out;
  }

  /// Number of distinct stored values.
  std::size_t size() const { return count_vectors().size(); }

  Real at_counts(const std::array<int, 3>& c) const { return values_[slot(c)]; }
  void set_counts(const std::array<int, 3>& c, Real v) { values_[slot(c)] = v; }

  /// Lookup by any (unsorted) multi-index of labels 0..d-1; permutations return the
  /// identical stored value.
  Real at(std::span<const int> multi_index) const { return at_counts(counts_of(multi_index)); }
  Real at(std::initializer_list<int> multi_index) const {
    return at(std::span<const int>(multi_index.begin(), multi_index.size()));
  }

  std::array<int, 3> counts_of(std::span<const int> multi_index) const {
    if (static_cast<int>(multi_index.size()) != order_ + 1) {
      throw ArgumentError("multi-index length must be order + 1");
    }
    std::array<int, 3> c{0, 0, 0};
    for (int i : multi_index) {
      if (i < 0 || i >= d_) throw ArgumentError("label out of range in multi-index");
      ++c[i];
    }
    return c;
  }

  std::vector<Entry> entries() const {
    std::vector<Entry> out;
    for (const auto& c : count_vectors()) {
      Entry e;
      for (int l = 0; l < 3; ++l) e.index.insert(e.index.end(), c[l], l);
      e.value = at_counts(c);
      out.push_back(std::move(e));
    }
    return out;
  }

  /// Largest relative disagreement with the residue route recorded while building,
  /// or a negative value when no cross-check ran.
  Real cross_check_discrepancy() const { return cross_check_; }
  void set_cross_check_discrepancy(Real v) { cross_check_ = v; }

 private:
  int stride() const { return order_ + 2; }
  std::size_t slot(const std::array<int, 3>& c) const {
    if (c[0] < 0 || c[1] < 0 || c[2] < 0 || c[0] + c[1] + c[2] != order_ + 1 ||
        (d_ < 2 && c[1] > 0) || (d_ < 3 && c[2] > 0)) {
      throw ArgumentError("label counts do not describe a coefficient of this table");
    }
    return static_cast<std::size_t>(c[0] * stride() + c[1]);
  }

  int order_;
  int d_;
  std::vector<Real> values_;
  Real cross_check_ = Real(-1);
};

using CoeffTable = BasicCoeffTable<double>;

struct TableOptions {
  CoeffMethod method = CoeffMethod::divided_difference;
#ifdef NDEBUG
  bool cross_check = false;
#else
  bool cross_check = true;
#endif
};

/// All coefficients of order n for f over the spectrum s.
template <typename Real>
BasicCoeffTable<Real> build_table(const ScalarFn& f, const BasicSpectrum<Real>& s, int n,
                                  TableOptions options = {}) {
  if (n < 0) throw ArgumentError("derivative order must be non-negative");
  BasicCoeffTable<Real> table(n, s.d());
  const std::span<const Real> alphas(s.alphas());
  Real worst(0);
  for (const auto& c : table.count_vectors()) {
    const IndexClass cls{c};
    const Real v = coefficient(f, cls, alphas, options.method);
    if (!is_finite(v)) throw NumericalError("non-finite coefficient for " + f.spec());
    table.set_counts(c, v);
    if (options.cross_check && options.method != CoeffMethod::residue) {
      const Real r = coeff_residue(f, cls, alphas);
      const Real denom = std::max(abs(v), abs(r));
      if (denom > Real(0)) worst = std::max(worst, abs(v - r) / denom);
    }
  }
  if (options.cross_check && options.method != CoeffMethod::residue) {
    table.set_cross_check_discrepancy(worst);
  }
  return table;
}

}  // namespace tensorfn
