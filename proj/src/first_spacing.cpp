#include "circdiv/first_spacing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace circdiv {

namespace {

constexpr double kRelTol = 1e-12;
// absolute slack on the near-equality window and the diameter cuts
constexpr double kWindowTol = 1e-9;
constexpr double kMinPointsPerOscillation = 8.0;

DecouplingConstant decoupling_terms(double beta, double q, double eta) {
  DecouplingConstant d;
  d.term1 = std::pow(eta, -beta * (0.5 - 1.0 / q));
  d.term2 = std::pow(eta, -beta * (1.0 - 2.0 / q) + 1.0 / q);
  d.term3 = std::pow(eta, -(beta - 0.5) * (1.0 - 2.0 / q));
  return d;
}

void require_assumption(double K, double L, double eta, double q, const char* what) {
  if (q > 4.0 && !(std::pow(L / K, (q - 2.0) / (q - 4.0)) <= eta * (1.0 + kRelTol)))
    throw DomainError(std::string(what) + ": assumption (L/K)^{(q-2)/(q-4)} <= eta fails");
}

struct PairRec {
  std::int64_t P;
  double s;
  std::uint8_t kmin, kmax, lmin, lmax;  // offsets from K and L
};

std::size_t first_at_least(const std::vector<double>& thresholds, double v) {
  std::size_t i = 0;
  while (i < thresholds.size() && v > thresholds[i] + kWindowTol) ++i;
  return i;
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::size_t index_of(const std::vector<double>& v, double x) {
  return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
}

}  // namespace

void SpacingConfig::validate() const {
  if (!(L >= 1 && L < K)) throw DomainError("SpacingConfig: need 1 <= L < K");
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("SpacingConfig: need 0 < eta < 1");
  const double inv = 1.0 / eta;
  if (!(K <= inv * (1.0 + kRelTol))) throw DomainError("SpacingConfig: need K <= 1/eta");
  if (!(inv <= static_cast<double>(K) * L * (1.0 + kRelTol))) throw DomainError("SpacingConfig: need 1/eta <= KL");
  if (!(q >= 4.0 && q <= 4.5)) throw DomainError("SpacingConfig: need 4 <= q <= 4.5");
}

CoefficientGrid ones_grid(int K, int L) { return CoefficientGrid::Constant(K, L, {1.0, 0.0}); }

CoefficientGrid random_phase_grid(int K, int L, std::mt19937_64& rng) {
  CoefficientGrid a(K, L);
  for (int j = 0; j < L; ++j)
    for (int i = 0; i < K; ++i) a(i, j) = unit_phase(static_cast<long double>(rng() >> 11) * 0x1.0p-53L);
  return a;
}

Eigen::Vector3d max_frequencies(int K, int L) {
  return {2.0 * L, 4.0 * K * L, 2.0 * L * std::sqrt(2.0 * K)};
}

GqQuadrature gq_norm(const SpacingConfig& cfg, const CoefficientGrid& a, double points_per_oscillation) {
  cfg.validate();
  const int K = cfg.K, L = cfg.L;
  if (a.rows() != K || a.cols() != L) throw DomainError("gq_norm: coefficient grid must be K x L");
  if ((a.array().abs() > 1.0 + kRelTol).any()) throw DomainError("gq_norm: coefficients must satisfy |a| <= 1");
  if (!(points_per_oscillation >= kMinPointsPerOscillation))
    throw DomainError("gq_norm: resolution below 8 points per oscillation; refusing");
  const double A = 1.0 / (cfg.eta * L * std::sqrt(static_cast<double>(K)));
  const Eigen::Vector3d f = max_frequencies(K, L);
  GqQuadrature out;
  // x1 and x2 carry integer frequencies, so one period stands in for [-1, 1]
  out.n1 = static_cast<std::int64_t>(std::ceil(points_per_oscillation * f(0) - 1e-9));
  out.n2 = static_cast<std::int64_t>(std::ceil(points_per_oscillation * f(1) - 1e-9));
  out.n3 = static_cast<std::int64_t>(std::ceil(points_per_oscillation * f(2) * 2.0 * A - 1e-9));
  if (a.isZero(0.0)) return out;

  const std::int64_t n1 = out.n1, n2 = out.n2, n3 = out.n3;
  // E1(l, i) = e(l (i + 1/2)/n1), exact residue before the phase
  Eigen::MatrixXcd E1(L, n1);
  for (std::int64_t i = 0; i < n1; ++i)
    for (int j = 0; j < L; ++j) {
      const std::int64_t l = L + j;
      E1(j, i) = unit_phase(static_cast<long double>((l * (2 * i + 1)) % (2 * n1)) / (2 * n1));
    }
  // W[l](j, k) = e(k l (j + 1/2)/n2), fixed across x3 slices
  std::vector<Eigen::MatrixXcd> W(static_cast<std::size_t>(L), Eigen::MatrixXcd(n2, K));
  for (int jl = 0; jl < L; ++jl)
    for (int ik = 0; ik < K; ++ik) {
      const std::int64_t kl = static_cast<std::int64_t>(K + ik) * (L + jl);
      for (std::int64_t j = 0; j < n2; ++j)
        W[jl](j, ik) = unit_phase(static_cast<long double>((kl * (2 * j + 1)) % (2 * n2)) / (2 * n2));
    }
  std::vector<long double> root_k(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) root_k[i] = std::sqrt(static_cast<long double>(K + i));

  Eigen::MatrixXcd C(n2, L);
  Eigen::VectorXcd b(K);
  Eigen::MatrixXcd V(n2, n1);
  const bool quartic = cfg.q == 4.0;
  const double half_q = cfg.q / 2.0;
  long double total = 0.0L;
  for (std::int64_t t = 0; t < n3; ++t) {
    const long double x3 = -A + (t + 0.5L) * 2.0L * A / n3;
    for (int jl = 0; jl < L; ++jl) {
      for (int ik = 0; ik < K; ++ik) b(ik) = a(ik, jl) * unit_phase((L + jl) * root_k[ik] * x3);
      C.col(jl).noalias() = W[jl] * b;
    }
    V.noalias() = C * E1;
    total += quartic ? V.cwiseAbs2().squaredNorm() : V.cwiseAbs2().array().pow(half_q).sum();
  }
  const long double avg = total / (static_cast<long double>(n1) * n2 * n3);
  out.value = static_cast<double>(std::pow(avg, 1.0L / cfg.q));
  return out;
}

GqConvergence gq_norm_doubling(const SpacingConfig& cfg, const CoefficientGrid& a, double points_per_oscillation) {
  GqConvergence out;
  out.coarse = gq_norm(cfg, a, points_per_oscillation).value;
  out.fine = gq_norm(cfg, a, 2.0 * points_per_oscillation).value;
  out.relative_change = out.fine == 0.0 ? 0.0 : std::fabs(out.fine - out.coarse) / out.fine;
  return out;
}

std::vector<std::int64_t> count_system_star_batch(int K, int L, const std::vector<StarQuery>& queries,
                                                  bool swap_roles) {
  if (!(K >= 1 && L >= 1 && K <= 128 && L <= 128)) throw DomainError("count_system_star: need 1 <= K, L <= 128");
  std::vector<double> ws, dks, dls;
  for (const auto& q : queries) {
    if (!(q.eta > 0.0) || !(q.w >= 0.0)) throw DomainError("count_system_star: need eta > 0 and w >= 0");
    const double bk = swap_roles ? q.beta2 : q.beta1;
    const double bl = swap_roles ? q.beta1 : q.beta2;
    ws.push_back(q.w * q.eta * L * std::sqrt(static_cast<double>(K)));
    dks.push_back(std::pow(q.eta, bk) * K);
    dls.push_back(std::pow(q.eta, bl) * L);
  }
  const std::vector<double> qw = ws, qk = dks, ql = dls;
  ws = sorted_unique(ws);
  dks = sorted_unique(dks);
  dls = sorted_unique(dls);
  const double wmax = ws.empty() ? 0.0 : ws.back();
  const std::size_t nw = ws.size() + 1, nk = dks.size() + 1, nl = dls.size() + 1;
  std::vector<std::int64_t> hist(nw * nk * nl, 0);

  std::vector<double> root(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) root[i] = std::sqrt(static_cast<double>(K + i));
  std::vector<PairRec> pairs;
  for (int sigma = 2 * L; sigma <= 4 * L - 2; ++sigma) {
    pairs.clear();
    for (int l1 = std::max(L, sigma - (2 * L - 1)); l1 <= std::min(2 * L - 1, sigma - L); ++l1) {
      const int l2 = sigma - l1;
      for (int i1 = 0; i1 < K; ++i1)
        for (int i2 = 0; i2 < K; ++i2) {
          PairRec p;
          p.P = static_cast<std::int64_t>(K + i1) * l1 + static_cast<std::int64_t>(K + i2) * l2;
          p.s = l1 * root[i1] + l2 * root[i2];
          p.kmin = static_cast<std::uint8_t>(std::min(i1, i2));
          p.kmax = static_cast<std::uint8_t>(std::max(i1, i2));
          p.lmin = static_cast<std::uint8_t>(std::min(l1, l2) - L);
          p.lmax = static_cast<std::uint8_t>(std::max(l1, l2) - L);
          pairs.push_back(p);
        }
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const PairRec& x, const PairRec& y) { return x.P != y.P ? x.P < y.P : x.s < y.s; });
    std::size_t g0 = 0;
    while (g0 < pairs.size()) {
      std::size_t g1 = g0;
      while (g1 < pairs.size() && pairs[g1].P == pairs[g0].P) ++g1;
      std::size_t lo = g0;
      for (std::size_t i = g0; i < g1; ++i) {
        const PairRec& p = pairs[i];
        while (lo < g1 && pairs[lo].s < p.s - wmax - kWindowTol) ++lo;
        for (std::size_t j = lo; j < g1 && pairs[j].s <= p.s + wmax + kWindowTol; ++j) {
          const PairRec& r = pairs[j];
          const double dk = std::max(p.kmax, r.kmax) - std::min(p.kmin, r.kmin);
          const double dl = std::max(p.lmax, r.lmax) - std::min(p.lmin, r.lmin);
          const std::size_t iw = first_at_least(ws, std::fabs(p.s - r.s));
          const std::size_t ik = first_at_least(dks, dk);
          const std::size_t il = first_at_least(dls, dl);
          ++hist[(iw * nk + ik) * nl + il];
        }
      }
      g0 = g1;
    }
  }
  // cumulative sums turn the histogram into "satisfies thresholds <= index" counts
  for (std::size_t a = 0; a < nw; ++a)
    for (std::size_t b = 0; b < nk; ++b)
      for (std::size_t c = 0; c < nl; ++c) {
        std::int64_t& h = hist[(a * nk + b) * nl + c];
        if (a) h += hist[((a - 1) * nk + b) * nl + c];
        if (b) h += hist[(a * nk + b - 1) * nl + c];
        if (c) h += hist[(a * nk + b) * nl + c - 1];
        if (a && b) h -= hist[((a - 1) * nk + b - 1) * nl + c];
        if (a && c) h -= hist[((a - 1) * nk + b) * nl + c - 1];
        if (b && c) h -= hist[(a * nk + b - 1) * nl + c - 1];
        if (a && b && c) h += hist[((a - 1) * nk + b - 1) * nl + c - 1];
      }
  std::vector<std::int64_t> out;
  out.reserve(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const std::size_t a = index_of(ws, qw[i]), b = index_of(dks, qk[i]), c = index_of(dls, ql[i]);
    out.push_back(hist[(a * nk + b) * nl + c]);
  }
  return out;
}

std::int64_t count_unlocalized(int n, int K, int L, double eta, double w) {
  if (n != 2) throw DomainError("count_unlocalized: only n = 2 is supported");
  return count_system_star_batch(K, L, {{eta, 0.0, 0.0, w}})[0];
}

std::int64_t count_system_star(const SystemStarSpec& spec) {
  if (spec.n != 2) throw DomainError("count_system_star: only n = 2 is supported");
  return count_system_star_batch(spec.K, spec.L, {{spec.eta, spec.beta1, spec.beta2, spec.w}}, spec.swap_roles)[0];
}

ConePoint cone_map(int k, int l, int K, int L) {
  if (!(K >= 1 && L >= 1 && k >= K && k <= 2 * K && l >= L && l <= 2 * L))
    throw DomainError("cone_map: need k in [K, 2K] and l in [L, 2L]");
  const double t = static_cast<double>(k) / K;
  const double s = static_cast<double>(l) / L;
  ConePoint p;
  p.xi = {s * std::sqrt(t), s * (t - 1.0) / 2.0, s * (t + 1.0) / 2.0};
  p.k = k;
  p.l = l;
  return p;
}

bool cone_identity_exact(int k, int l, int K, int L) {
  const Rational t(k, K), s(l, L);
  const Rational xi1_sq = s * s * t;
  const Rational xi2 = s * (t - 1) / 2;
  const Rational xi3 = s * (t + 1) / 2;
  return xi3 * xi3 - xi2 * xi2 == xi1_sq;
}

double circular_parameter(const ConePoint& p) { return std::atan2(p.xi(1), p.xi(0)); }

ConeSeparation cone_grid_separations(int K, int L) {
  ConeSeparation out;
  out.min_circular_times_K = out.min_null_times_L = std::numeric_limits<double>::infinity();
  for (int k = K; k < 2 * K - 1; ++k) {
    const double d = circular_parameter(cone_map(k + 1, L, K, L)) - circular_parameter(cone_map(k, L, K, L));
    out.min_circular_times_K = std::min(out.min_circular_times_K, d * K);
    out.max_circular_times_K = std::max(out.max_circular_times_K, d * K);
  }
  for (int k = K; k < 2 * K; ++k)
    for (int l = L; l < 2 * L - 1; ++l) {
      const double d = cone_map(k, l + 1, K, L).xi(2) - cone_map(k, l, K, L).xi(2);
      out.min_null_times_L = std::min(out.min_null_times_L, d * L);
      out.max_null_times_L = std::max(out.max_null_times_L, d * L);
    }
  return out;
}

std::vector<Plate> plate_partition(int K, int L, double eta, double beta1, double beta2, bool swap_roles) {
  if (!(K >= 1 && L >= 1)) throw DomainError("plate_partition: need K, L >= 1");
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("plate_partition: need 0 < eta <= 1");
  const double dk = std::pow(eta, swap_roles ? beta2 : beta1) * K;
  const double dl = std::pow(eta, swap_roles ? beta1 : beta2) * L;
  if (dk < 1.0 - kRelTol)
    throw DomainError("plate_partition: k-cell width eta^beta K = " + std::to_string(dk) + " < 1");
  if (dl < 1.0 - kRelTol)
    throw DomainError("plate_partition: l-cell width eta^beta L = " + std::to_string(dl) + " < 1");
  std::map<std::pair<long, long>, Plate> cells;
  for (int k = K; k < 2 * K; ++k)
    for (int l = L; l < 2 * L; ++l) {
      const long ck = static_cast<long>(std::floor((k - K) / dk + kRelTol));
      const long cl = static_cast<long>(std::floor((l - L) / dl + kRelTol));
      cells[{ck, cl}].members.emplace_back(k, l);
    }
  std::vector<Plate> plates;
  plates.reserve(cells.size());
  for (auto& [key, plate] : cells) {
    plate.index = static_cast<int>(plates.size());
    plate.k_lo = plate.l_lo = std::numeric_limits<int>::max();
    plate.k_hi = plate.l_hi = std::numeric_limits<int>::min();
    double x3lo = 1e300, x3hi = -1e300, plo = 1e300, phi = -1e300, x3sum = 0.0;
    for (auto [k, l] : plate.members) {
      plate.k_lo = std::min(plate.k_lo, k);
      plate.k_hi = std::max(plate.k_hi, k);
      plate.l_lo = std::min(plate.l_lo, l);
      plate.l_hi = std::max(plate.l_hi, l);
      const auto p = cone_map(k, l, K, L);
      const double ang = circular_parameter(p);
      x3lo = std::min(x3lo, p.xi(2));
      x3hi = std::max(x3hi, p.xi(2));
      plo = std::min(plo, ang);
      phi = std::max(phi, ang);
      x3sum += p.xi(2);
    }
    plate.null_extent = x3hi - x3lo;
    plate.circular_extent = (phi - plo) * x3sum / static_cast<double>(plate.members.size());
    plates.push_back(std::move(plate));
  }
  return plates;
}

DecouplingConstant decoupling_D(double beta1, double beta2, double q, double eta) {
  if (!(beta1 >= 0.5 && beta1 <= 1.0)) throw DomainError("decoupling_D: need beta1 in [1/2, 1]");
  if (!(beta2 >= 0.0 && beta2 <= 1.0)) throw DomainError("decoupling_D: need beta2 in [0, 1]");
  if (!(q >= 2.0)) throw DomainError("decoupling_D: need q >= 2");
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("decoupling_D: need 0 < eta < 1");
  return decoupling_terms(beta1 + beta2, q, eta);
}

Betas betas_solve(double K, double L, double eta, double q) {
  if (!(q >= 4.0)) throw DomainError("betas_solve: need q >= 4");
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("betas_solve: need 0 < eta < 1");
  if (!(K > 0.0 && L > 0.0)) throw DomainError("betas_solve: need K, L > 0");
  require_assumption(K, L, eta, q, "betas_solve");
  Betas b;
  b.beta = 2.0 / (q - 2.0);
  // eta^{beta1} K = eta^{beta2} L
  b.beta1 = b.beta / 2.0 + std::log(L / K) / (2.0 * std::log(eta));
  b.beta2 = b.beta - b.beta1;
  return b;
}

ExplicitBound e4_bound(double K, double L, double eta, double beta1, double beta2, double eps) {
  ExplicitBound b;
  const double inner = std::pow(eta, 2.0 * (beta1 + beta2)) * K * K * L + std::pow(eta, 2.0 * beta1) * K * K +
                       std::pow(eta, 2.0 * beta2) * L * L;
  b.base = std::pow(K * L, 0.25) * std::pow(inner, 0.25);
  b.eps_factor = std::pow(K, eps);
  return b;
}

double e4_count_cap(double K, double L, double eta, double beta1, double beta2) {
  const double inner = std::pow(eta, 2.0 * (beta1 + beta2)) * K * K * L + std::pow(eta, 2.0 * beta1) * K * K +
                       std::pow(eta, 2.0 * beta2) * L * L;
  return 100.0 * std::pow(K, 1.05) * L * inner;
}

double gq_upper_formula(double K, double L, double eta, double q) {
  return std::pow(eta, (q - 4.0) / (q * (q - 2.0))) * std::pow(K * L, 1.0 - 2.0 / q) *
         std::pow(1.0 + std::pow(eta, 2.0 / (q - 2.0)) * K, 1.0 / q);
}

ExplicitBound gq_upper_bound(double K, double L, double eta, double q, double eps) {
  if (!(q >= 4.0)) throw DomainError("gq_upper_bound: need q >= 4");
  if (!(eta > 0.0)) throw DomainError("gq_upper_bound: need eta > 0");
  require_assumption(K, L, eta, q, "gq_upper_bound");
  ExplicitBound b;
  b.base = gq_upper_formula(K, L, eta, q);
  b.eps_factor = std::pow(eta, -eps);
  return b;
}

double interpolation_replay(double K, double L, double eta, double q) {
  const auto b = betas_solve(K, L, eta, q);
  const double D = decoupling_terms(b.beta, q, eta).simplified();
  const double e4 = e4_bound(K, L, eta, b.beta1, b.beta2).base;
  return D * std::pow(std::pow(eta, b.beta) * K * L, 1.0 - 4.0 / q) * std::pow(e4, 4.0 / q);
}

}  // namespace circdiv
