#include <algorithm>
#include <cmath>
#include <ostream>

#include "bpdo/format.hpp"
#include "bpdo/spaces.hpp"
#include "bpdo/verify.hpp"

namespace bpdo {

namespace {

cplx expi(double ph) { return {std::cos(ph), std::sin(ph)}; }

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + mid));
  return m;
}

std::size_t draw_index(Rng& rng, std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(n))));
}

}  // namespace

BilinearSearch::BilinearSearch(const PlaneWaveSymbol& sigma, const AtomDictionary& dict, double s1, double s2)
    : dict_(&dict), grid_(dict.grid) {
  const Axis xs = grid_.space_axis();
  M_ = sigma.terms().size();
  K_ = dict.atoms.size();
  nx_ = xs.count();
  if (M_ == 0 || K_ == 0) throw Error("BilinearSearch: empty symbol or dictionary");
  coeff_phase_.resize(M_ * nx_);
  psi1_.resize(M_ * K_ * nx_);
  psi2_.resize(M_ * K_ * nx_);
  for (std::size_t m = 0; m < M_; ++m) {
    const auto& t = sigma.terms()[m];
    for (std::size_t i = 0; i < nx_; ++i) coeff_phase_[m * nx_ + i] = t.coeff * expi(xs.point(i) * t.eta[0]);
    for (std::size_t k = 0; k < K_; ++k)
      for (std::size_t i = 0; i < nx_; ++i) {
        psi1_[(m * K_ + k) * nx_ + i] = dict.atoms[k](xs.point(i) + t.eta[1]);
        psi2_[(m * K_ + k) * nx_ + i] = dict.atoms[k](xs.point(i) + t.eta[2]);
      }
  }
  gram1_ = sobolev_gram(dict, s1);
  gram2_ = sobolev_gram(dict, s2);
}

void BilinearSearch::accumulate(const std::vector<cplx>& psi, const std::vector<cplx>& a,
                                std::vector<cplx>& u) const {
  u.assign(M_ * nx_, 0.0);
  for (std::size_t m = 0; m < M_; ++m)
    for (std::size_t k = 0; k < K_; ++k) {
      if (a[k] == 0.0) continue;
      const cplx* p = &psi[(m * K_ + k) * nx_];
      cplx* row = &u[m * nx_];
      for (std::size_t i = 0; i < nx_; ++i) row[i] += a[k] * p[i];
    }
}

void BilinearSearch::combine(const std::vector<cplx>& u1, const std::vector<cplx>& u2,
                             std::vector<cplx>& t) const {
  t.assign(nx_, 0.0);
  for (std::size_t m = 0; m < M_; ++m) {
    const cplx* c = &coeff_phase_[m * nx_];
    const cplx* a = &u1[m * nx_];
    const cplx* b = &u2[m * nx_];
    for (std::size_t i = 0; i < nx_; ++i) t[i] += c[i] * a[i] * b[i];
  }
}

double BilinearSearch::amalgam_l2_l1(const std::vector<cplx>& t) const {
  const Axis xs = grid_.space_axis();
  const int lo = cube_index(xs.point(0));
  std::vector<double> cubes(static_cast<std::size_t>(cube_index(xs.point(nx_ - 1)) - lo + 1), 0.0);
  for (std::size_t i = 0; i < nx_; ++i)
    cubes[static_cast<std::size_t>(cube_index(xs.point(i)) - lo)] += grid_.x_step * std::norm(t[i]);
  double s = 0.0;
  for (double c : cubes) s += std::sqrt(c);
  return s;
}

std::vector<cplx> BilinearSearch::output(const std::vector<cplx>& a, const std::vector<cplx>& b) const {
  std::vector<cplx> u1, u2, t;
  accumulate(psi1_, a, u1);
  accumulate(psi2_, b, u2);
  combine(u1, u2, t);
  return t;
}

double BilinearSearch::objective(const std::vector<cplx>& a, const std::vector<cplx>& b) const {
  const double n1 = gram_norm(gram1_, a), n2 = gram_norm(gram2_, b);
  if (n1 == 0.0 || n2 == 0.0) return 0.0;
  return amalgam_l2_l1(output(a, b)) / (n1 * n2);
}

BilinearSearch::Result BilinearSearch::run(Rng& rng, const SearchConfig& cfg) const {
  Result best;
  std::vector<cplx> u1, u2, cand, t;
  for (int r = 0; r < cfg.restarts; ++r) {
    std::vector<cplx> a(K_), b(K_);
    for (auto& v : a) v = complex_normal(rng);
    for (auto& v : b) v = complex_normal(rng);
    const double na = gram_norm(gram1_, a), nb = gram_norm(gram2_, b);
    for (auto& v : a) v /= na;
    for (auto& v : b) v /= nb;
    accumulate(psi1_, a, u1);
    accumulate(psi2_, b, u2);
    combine(u1, u2, t);
    double cur = amalgam_l2_l1(t);
    double step = 0.5;

    for (int s = 0; s < cfg.steps; ++s) {
      const bool first = s % 2 == 0;
      std::vector<cplx>& coef = first ? a : b;
      const std::vector<cplx>& psi = first ? psi1_ : psi2_;
      const std::vector<cplx>& gram = first ? gram1_ : gram2_;
      std::vector<cplx>& u = first ? u1 : u2;

      const std::size_t k = draw_index(rng, K_);
      const cplx delta = step * complex_normal(rng);
      std::vector<cplx> next = coef;
      next[k] += delta;
      const double norm = gram_norm(gram, next);
      if (norm == 0.0) continue;
      cand.resize(M_ * nx_);
      for (std::size_t m = 0; m < M_; ++m) {
        const cplx* p = &psi[(m * K_ + k) * nx_];
        for (std::size_t i = 0; i < nx_; ++i) cand[m * nx_ + i] = (u[m * nx_ + i] + delta * p[i]) / norm;
      }
      combine(first ? cand : u1, first ? u2 : cand, t);
      const double val = amalgam_l2_l1(t);
      if (val > cur) {
        for (auto& v : next) v /= norm;
        coef = std::move(next);
        u.swap(cand);
        cur = val;
        step = std::min(4.0, step * 1.5);
      } else {
        step = std::max(0.02, step * 0.8);
      }
    }
    if (cur > best.ratio) {
      best.ratio = cur;
      best.a = a;
      best.b = b;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

std::vector<std::array<double, 3>> default_r_triples() {
  std::vector<std::array<double, 3>> out;
  for (double a : {1.0, 2.0, 4.0})
    for (double b : {1.0, 2.0, 4.0})
      for (double c : {1.0, 2.0, 4.0}) out.push_back({a, b, c});
  return out;
}

void validate(const EnsembleConfig& cfg, bool require_minimums) {
  if (!(cfg.s1 > 0.0) || !(cfg.s2 > 0.0) || std::abs(cfg.s1 + cfg.s2 - 0.5) > 1e-12)
    throw Error("ensemble: exponents must satisfy s1, s2 > 0 and s1 + s2 = 1/2");
  if (cfg.r_triples.empty()) throw Error("ensemble: no radius triples given");
  for (const auto& r : cfg.r_triples)
    for (double v : r)
      if (!(v >= 1.0)) throw Error("ensemble: radii must be >= 1");
  if (cfg.trials_per_triple < 1 || cfg.search.restarts < 1 || cfg.search.steps < 0)
    throw Error("ensemble: trial, restart and step counts must be positive");
  if (require_minimums && (cfg.trials_per_triple < 20 || cfg.search.restarts < 10))
    throw Error("ensemble: at least 20 trials per triple and 10 restarts are required");
}

namespace {

// Least-squares slope of log y against log x.
double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

void finish_stats(EnsembleStats& st, bool fit) {
  st.trials = static_cast<int>(st.records.size());
  st.ratios.clear();
  for (const auto& r : st.records) st.ratios.push_back(r.ratio);
  st.max_ratio = st.ratios.empty() ? 0.0 : *std::max_element(st.ratios.begin(), st.ratios.end());
  st.median_ratio = median_of(st.ratios);
  if (!fit) return;
  static const char* names[3] = {"R0", "R1", "R2"};
  for (std::size_t a = 0; a < 3; ++a) {
    std::map<double, double> marginal;
    for (const auto& r : st.records) {
      double& m = marginal[r.radii[a]];
      m = std::max(m, r.raw_ratio);
    }
    std::vector<double> xs, ys;
    for (const auto& [r, m] : marginal) {
      st.fit_rows.push_back({names[a], r, m});
      xs.push_back(r);
      ys.push_back(m);
    }
    st.fitted_exponents[names[a]] = log_slope(xs, ys);
  }
}

}  // namespace

EnsembleStats estimate_prop_constant(const EnsembleConfig& cfg) {
  validate(cfg, false);
  const AtomDictionary dict = build_atom_dictionary(cfg.grid);
  EnsembleStats st;
  int trial = 0;
  for (std::size_t ti = 0; ti < cfg.r_triples.size(); ++ti) {
    const auto R = cfg.r_triples[ti];
    for (int k = 0; k < cfg.trials_per_triple; ++k, ++trial) {
      Rng rng = trial_rng(cfg.seed, 0x9409, static_cast<std::uint64_t>(trial));
      const PlaneWaveSymbol sigma = random_plane_wave_symbol(rng, R, default_plane_wave_terms(R));
      const double ul = sigma.uniform_local_l2(cfg.grid);
      const BilinearSearch search(sigma, dict, cfg.s1, cfg.s2);
      const double n = search.run(rng, cfg.search).ratio;
      TrialRecord rec;
      rec.trial = trial;
      rec.radii = R;
      rec.symbol_norm = ul;
      rec.raw_ratio = n / ul;
      rec.ratio = rec.raw_ratio / std::sqrt(R[0] * R[1] * R[2]);
      st.records.push_back(rec);
    }
  }
  finish_stats(st, true);
  return st;
}

// ---------------------------------------------------------------------------

namespace {

// Sparse sum of modulated low-frequency plane-wave blocks.
PlaneWaveSymbol random_modulated_sum(Rng& rng, int pieces, int terms_per_piece, int k_max) {
  std::vector<PlaneWaveTerm> terms;
  std::array<double, 3> radii{1.0, 1.0, 1.0};
  for (int p = 0; p < pieces; ++p) {
    std::array<double, 3> k;
    for (auto& v : k) v = std::floor(uniform(rng, -k_max, k_max + 1.0));
    for (int j = 0; j < terms_per_piece; ++j) {
      PlaneWaveTerm t;
      t.coeff = complex_normal(rng);
      for (std::size_t a = 0; a < 3; ++a) {
        t.eta[a] = k[a] + uniform(rng, -0.5, 0.5);
        radii[a] = std::max(radii[a], std::abs(t.eta[a]));
      }
      terms.push_back(t);
    }
  }
  return PlaneWaveSymbol(std::move(terms), radii);
}

SampledField as_field(const GridSpec& grid, std::vector<cplx> v) {
  return SampledField{grid, Domain::space, std::move(v), std::nullopt};
}

}  // namespace

TheoremStats check_theorem(const TheoremConfig& cfg) {
  const AtomDictionary dict = build_atom_dictionary(cfg.grid);
  const DecompPair pair = DecompPair::build(1);
  TheoremStats out;
  out.modulation_spread = 1.0;
  int trial = 0;
  for (const auto& s : cfg.exponents) {
    EnsembleStats st;
    const int total = cfg.plane_wave_trials + cfg.modulated_trials;
    for (int k = 0; k < total; ++k, ++trial) {
      Rng rng = trial_rng(cfg.seed, 0x7e0, static_cast<std::uint64_t>(trial));
      PlaneWaveSymbol sigma;
      if (k < cfg.plane_wave_trials) {
        std::array<double, 3> R;
        for (auto& v : R) v = uniform(rng, 0.0, 1.0) < 0.5 ? 1.0 : 2.0;
        sigma = random_plane_wave_symbol(rng, R, default_plane_wave_terms(R));
      } else {
        sigma = random_modulated_sum(rng, 3, 4, 3);
      }
      const double m_norm = sigma.modulation_norm_inf1(pair);
      const Rng search_seed = rng;
      Rng search_rng = search_seed;
      const BilinearSearch search(sigma, dict, s[0], s[1]);
      const auto res = search.run(search_rng, cfg.search);

      TrialRecord rec;
      rec.trial = trial;
      rec.radii = sigma.radii();
      rec.symbol_norm = m_norm;
      rec.raw_ratio = res.ratio;
      rec.ratio = res.ratio / m_norm;
      st.records.push_back(rec);

      // Embedding chain and the local Hardy norm on the best output.
      const SampledField T = as_field(cfg.grid, search.output(res.a, res.b));
      const double l2l1 = amalgam_norm(T, 2.0, 1.0).value;
      for (double r : {1.0, 1.5, 2.0}) {
        const double lr = lp_norm(T, r).value, l2lr = amalgam_norm(T, 2.0, r).value;
        out.embedding_excess = std::max({out.embedding_excess, lr / l2lr - 1.0, l2lr / l2l1 - 1.0});
      }
      out.hardy_ratio = std::max(out.hardy_ratio, local_hardy_norm(T).value / l2l1);

      // Modulated copies of the first symbol of each kind, searched with the same stream.
      if (k == 0 || k == cfg.plane_wave_trials) {
        double lo = rec.ratio, hi = rec.ratio;
        for (const std::array<double, 3> shift :
             {std::array<double, 3>{1, 0, 0}, {2, 0, 0}, {0, 1, 0}, {0, 0, 1}}) {
          const PlaneWaveSymbol moved = sigma.modulated(shift);
          Rng again = search_seed;
          const double r = BilinearSearch(moved, dict, s[0], s[1]).run(again, cfg.search).ratio /
                           moved.modulation_norm_inf1(pair);
          lo = std::min(lo, r);
          hi = std::max(hi, r);
        }
        out.modulation_spread = std::max(out.modulation_spread, hi / lo);
      }
    }
    finish_stats(st, false);
    out.max_ratio = std::max(out.max_ratio, st.max_ratio);
    out.by_exponents[format_real(s[0]) + "," + format_real(s[1])] = std::move(st);
  }
  return out;
}

// ---------------------------------------------------------------------------

void write_ensemble_csv(std::ostream& os, const EnsembleStats& s) {
  os << "trial,R0,R1,R2,ratio,raw_ratio,symbol_norm\n";
  for (const auto& r : s.records)
    os << r.trial << ',' << format_real(r.radii[0]) << ',' << format_real(r.radii[1]) << ','
       << format_real(r.radii[2]) << ',' << format_real(r.ratio) << ',' << format_real(r.raw_ratio) << ','
       << format_real(r.symbol_norm) << '\n';
}

void write_fit_csv(std::ostream& os, const EnsembleStats& s) {
  os << "parameter,R,marginal_max,fitted_exponent\n";
  for (const auto& r : s.fit_rows)
    os << r.parameter << ',' << format_real(r.r) << ',' << format_real(r.marginal_max) << ','
       << format_real(s.fitted_exponents.at(r.parameter)) << '\n';
}

nlohmann::json to_json(const EnsembleStats& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : s.fit_rows) rows.push_back({{"parameter", r.parameter}, {"R", r.r}, {"marginal_max", r.marginal_max}});
  return {{"trials", s.trials},
          {"max_ratio", s.max_ratio},
          {"median_ratio", s.median_ratio},
          {"fitted_exponents", s.fitted_exponents},
          {"fit_rows", rows}};
}

}  // namespace bpdo
