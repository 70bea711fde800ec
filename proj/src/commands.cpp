#include "nptorus/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include "json.hpp"
#include "nptorus/asymptotics.hpp"
#include "nptorus/cache.hpp"
#include "nptorus/spectral_assembly.hpp"
#include "nptorus/torus_geometry.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace nptorus::cli {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Run fn(i) for i in [0, n) on `jobs` worker threads. Results are written
/// into pre-sized slots, so the output is independent of the thread count.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  const int workers = static_cast<int>(std::min<std::size_t>(
      std::max(jobs, 1), std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
        fn(i);
    });
  for (auto& t : pool) t.join();
}

bool write_text(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out << body;
  return out.good();
}

int prepare_out_dir(const RunConfig& cfg, fs::path& out_dir) {
  out_dir = cfg.out_dir;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    std::cerr << "cannot create output directory: " << cfg.out_dir << "\n";
    return kExitIo;
  }
  // Probe writability up front so a bad --out fails before any computation.
  const fs::path probe = out_dir / ".nptorus_write_probe";
  if (!write_text(probe, "")) {
    std::cerr << "output directory not writable: " << cfg.out_dir << "\n";
    return kExitIo;
  }
  fs::remove(probe, ec);
  return kExitOk;
}

std::vector<double> sorted_xis(const RunConfig& cfg) {
  std::vector<double> xs = cfg.xi;
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

double vec_dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// ---------------------------------------------------------------------------
// geometry-check

struct GeometryDeviation {
  double xi = 0.0;
  double fundamental = 0.0;  // Cartesian vs toroidal fundamental solution
  double projection = 0.0;   // (x - y) . nu_x identity
  double normal_norm = 0.0;  // | |nu| - 1 |
};

GeometryDeviation geometry_identity_suite(double xi, int samples) {
  const TorusShape shape(xi, 1.0);
  std::mt19937 rng(20250823u + static_cast<unsigned>(1e6 * xi));
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  GeometryDeviation dev;
  dev.xi = xi;
  const double root = std::sqrt(1.0 - xi * xi);
  for (int i = 0; i < samples; ++i) {
    double eta, eta_p, phi, phi_p;
    do {
      eta = angle(rng);
      eta_p = angle(rng);
      phi = angle(rng);
      phi_p = angle(rng);
    } while (mu_minus_cos(shape, phi - phi_p, eta - eta_p) < 1e-4);

    const SurfacePoint px(eta, phi), py(eta_p, phi_p);
    const Vec3 x = to_cartesian(shape, px);
    const Vec3 y = to_cartesian(shape, py);
    const Vec3 d{x[0] - y[0], x[1] - y[1], x[2] - y[2]};
    const double dist = std::sqrt(vec_dot(d, d));

    const double lhs = 1.0 / (4.0 * std::numbers::pi * dist);
    const double den = mu_minus_cos(shape, phi - phi_p, eta - eta_p);
    const double rhs =
        std::sqrt(psi(shape, eta) * psi(shape, eta_p)) /
        (4.0 * std::numbers::pi * std::sqrt(2.0) * shape.R0() * xi *
         std::sqrt(den));
    dev.fundamental =
        std::max(dev.fundamental, std::abs(lhs - rhs) / std::abs(rhs));

    const Vec3 nu = outward_normal(shape, px);
    dev.normal_norm =
        std::max(dev.normal_norm, std::abs(std::sqrt(vec_dot(nu, nu)) - 1.0));

    const double dot = vec_dot(d, nu);
    const double sp = std::sin(0.5 * (phi - phi_p));
    const double t1 = shape.R0() * xi * root * den /
                      (psi(shape, eta) * psi(shape, eta_p));
    const double t2 = shape.R0() * root * 2.0 * sp * sp /
                      (xi * psi(shape, eta_p));
    dev.projection = std::max(
        dev.projection,
        std::abs(dot - (t1 - t2)) / (std::abs(t1) + std::abs(t2)));
  }
  return dev;
}

// ---------------------------------------------------------------------------
// shared record <-> JSON plumbing for the cache

json record_to_json(const modes::NumericalRangeRecord& r) {
  json j;
  j["s_kl"] = r.s_kl;
  j["ds_kl"] = r.ds_kl;
  j["I_spectral"] = r.I_spectral;
  if (r.has_direct) j["I_direct"] = r.I_direct;
  if (r.has_polar) j["I_polar"] = r.I_polar;
  if (r.has_lead) j["lead_pred"] = r.lead_pred;
  j["sign_verdict"] = modes::to_string(r.sign_verdict);
  j["err_estimate"] = r.err_estimate;
  j["converged"] = r.converged;
  return j;
}

bool record_from_json(const json& j, modes::RangeMethod method,
                      modes::NumericalRangeRecord& r) {
  const bool need_direct = method == modes::RangeMethod::direct ||
                           method == modes::RangeMethod::all;
  const bool need_polar = method == modes::RangeMethod::polar ||
                          method == modes::RangeMethod::all;
  if (!j.contains("s_kl") || (need_direct && !j.contains("I_direct")) ||
      (need_polar && !j.contains("I_polar")))
    return false;
  r.s_kl = j["s_kl"];
  r.ds_kl = j["ds_kl"];
  r.I_spectral = j["I_spectral"];
  r.has_direct = j.contains("I_direct");
  if (r.has_direct) r.I_direct = j["I_direct"];
  r.has_polar = j.contains("I_polar");
  if (r.has_polar) r.I_polar = j["I_polar"];
  r.has_lead = j.contains("lead_pred");
  if (r.has_lead) r.lead_pred = j["lead_pred"];
  const std::string v = j["sign_verdict"];
  r.sign_verdict = v == "positive"   ? modes::SignVerdict::positive
                   : v == "negative" ? modes::SignVerdict::negative
                                     : modes::SignVerdict::indeterminate;
  r.err_estimate = j["err_estimate"];
  r.converged = j["converged"];
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

int cmd_geometry_check(const RunConfig& cfg) {
  if (const std::string err = cfg.validate(); !err.empty()) {
    std::cerr << "config error: " << err << "\n";
    return kExitConfig;
  }
  fs::path out_dir;
  if (int rc = prepare_out_dir(cfg, out_dir); rc != kExitOk) return rc;

  constexpr double kTol = 1e-10;
  json report;
  report["tolerance"] = kTol;
  report["samples"] = 100;
  bool pass = true;
  for (double xi : sorted_xis(cfg)) {
    const GeometryDeviation dev = geometry_identity_suite(xi, 100);
    json entry;
    entry["xi"] = xi;
    entry["max_fundamental_dev"] = dev.fundamental;
    entry["max_projection_dev"] = dev.projection;
    entry["max_normal_norm_dev"] = dev.normal_norm;
    report["results"].push_back(entry);
    pass = pass && dev.fundamental <= kTol && dev.projection <= kTol &&
           dev.normal_norm <= 1e-14;
  }
  report["pass"] = pass;
  if (!write_text(out_dir / "geometry_report.json", report.dump(2) + "\n"))
    return kExitIo;
  return pass ? kExitOk : kExitNumerical;
}

int cmd_numrange(const RunConfig& cfg) {
  if (const std::string err = cfg.validate(); !err.empty()) {
    std::cerr << "config error: " << err << "\n";
    return kExitConfig;
  }
  fs::path out_dir;
  if (int rc = prepare_out_dir(cfg, out_dir); rc != kExitOk) return rc;

  struct Task {
    double xi;
    int k, l;
  };
  std::vector<Task> tasks;
  const auto xis = sorted_xis(cfg);
  for (double xi : xis)
    for (int k = 0; k <= cfg.k_max; ++k)
      for (int l = 0; l <= cfg.l_max; ++l) tasks.push_back({xi, k, l});

  const std::string cache_ver = "numrange-v1-" + cfg.method;
  const fs::path cache_dir = cfg.cache_dir;
  const auto spec = cfg.quad_spec();
  const auto method = cfg.range_method();

  std::vector<modes::NumericalRangeRecord> records(tasks.size());
  parallel_for(tasks.size(), cfg.jobs, [&](std::size_t i) {
    const Task& t = tasks[i];
    const CacheKey key =
        make_cache_key(t.xi, t.k, t.l, 0, cfg.rel_tol, cache_ver);
    modes::NumericalRangeRecord rec;
    rec.xi = t.xi;
    rec.k = t.k;
    rec.l = t.l;
    if (!cache_dir.empty()) {
      if (auto hit = cache_get(cache_dir, key)) {
        auto j = json::parse(*hit, nullptr, false);
        if (!j.is_discarded() && record_from_json(j["data"], method, rec)) {
          records[i] = rec;
          return;
        }
      }
    }
    const TorusShape shape(t.xi, 1.0);
    rec = modes::evaluate_range_record(shape, t.k, t.l, method, spec);
    records[i] = rec;
    if (!cache_dir.empty()) {
      json wrapped;
      wrapped["key"] = key.canonical;
      wrapped["data"] = record_to_json(rec);
      cache_put(cache_dir, key, wrapped.dump());
    }
  });

  std::ostringstream csv;
  csv << "xi,k,l,s_kl,ds_kl,I_spectral,I_direct,I_polar,lead_pred,"
         "sign_verdict,err_estimate\n";
  bool all_converged = true;
  for (const auto& r : records) {
    csv << format_g17(r.xi) << ',' << r.k << ',' << r.l << ','
        << format_g17(r.s_kl) << ',' << format_g17(r.ds_kl) << ','
        << format_g17(r.I_spectral) << ','
        << (r.has_direct ? format_g17(r.I_direct) : "") << ','
        << (r.has_polar ? format_g17(r.I_polar) : "") << ','
        << (r.has_lead ? format_g17(r.lead_pred) : "") << ','
        << modes::to_string(r.sign_verdict) << ','
        << format_g17(r.err_estimate) << '\n';
    all_converged = all_converged && r.converged;
  }
  if (!write_text(out_dir / "numrange.csv", csv.str())) return kExitIo;
  return all_converged ? kExitOk : kExitNumerical;
}

int cmd_spectrum(const RunConfig& cfg) {
  if (const std::string err = cfg.validate(); !err.empty()) {
    std::cerr << "config error: " << err << "\n";
    return kExitConfig;
  }
  fs::path out_dir;
  if (int rc = prepare_out_dir(cfg, out_dir); rc != kExitOk) return rc;

  struct Block {
    double xi;
    int k;
    std::vector<spectral::SpectrumRecord> records;
    bool failed = false;
    std::string error;
  };
  std::vector<Block> blocks;
  const auto xis = sorted_xis(cfg);
  for (double xi : xis)
    for (int k = 0; k <= cfg.k_max; ++k) blocks.push_back({xi, k, {}, false});

  const fs::path cache_dir = cfg.cache_dir;
  const auto spec = cfg.quad_spec();
  parallel_for(blocks.size(), cfg.jobs, [&](std::size_t i) {
    Block& b = blocks[i];
    const CacheKey key =
        make_cache_key(b.xi, b.k, 0, cfg.L, cfg.rel_tol, "spectrum-v1");
    if (!cache_dir.empty()) {
      if (auto hit = cache_get(cache_dir, key)) {
        auto j = json::parse(*hit, nullptr, false);
        if (!j.is_discarded() && j.contains("data")) {
          for (const auto& row : j["data"]) {
            spectral::SpectrumRecord r;
            r.xi = b.xi;
            r.k = b.k;
            r.L = cfg.L;
            r.index = row["index"];
            r.lambda_A = row["lambda_A"];
            r.lambda_np = row["lambda_np"];
            r.residual = row["residual"];
            r.build_err = row["build_err"];
            b.records.push_back(r);
          }
          return;
        }
      }
    }
    try {
      const TorusShape shape(b.xi, 1.0);
      b.records = spectral::mode_spectrum(shape, b.k, cfg.L, spec);
    } catch (const std::exception& e) {
      b.failed = true;
      b.error = e.what();
      return;
    }
    if (!cache_dir.empty()) {
      json rows = json::array();
      for (const auto& r : b.records) {
        json row;
        row["index"] = r.index;
        row["lambda_A"] = r.lambda_A;
        row["lambda_np"] = r.lambda_np;
        row["residual"] = r.residual;
        row["build_err"] = r.build_err;
        rows.push_back(row);
      }
      json wrapped;
      wrapped["key"] = key.canonical;
      wrapped["data"] = rows;
      cache_put(cache_dir, key, wrapped.dump());
    }
  });

  std::ostringstream csv;
  csv << "xi,k,L,index,lambda_A,lambda_np,residual\n";
  json summary;
  int total_negative = 0;
  bool any_failed = false;
  for (double xi : xis) {
    json per_xi;
    per_xi["xi"] = xi;
    per_xi["k_blocks"] = json::array();
    for (const auto& b : blocks) {
      if (b.xi != xi) continue;
      if (b.failed) {
        any_failed = true;
        per_xi["k_blocks"].push_back(
            {{"k", b.k}, {"failed", true}, {"error", b.error}});
        continue;
      }
      int pos = 0, neg = 0;
      for (const auto& r : b.records) {
        csv << format_g17(r.xi) << ',' << r.k << ',' << r.L << ',' << r.index
            << ',' << format_g17(r.lambda_A) << ',' << format_g17(r.lambda_np)
            << ',' << format_g17(r.residual) << '\n';
        if (r.lambda_np > 0.0) ++pos;
        if (r.lambda_np < 0.0) ++neg;
      }
      total_negative += neg;
      per_xi["k_blocks"].push_back(
          {{"k", b.k}, {"positive", pos}, {"negative", neg}});
    }
    summary["per_xi"].push_back(per_xi);
  }
  summary["total_negative"] = total_negative;
  summary["any_failed"] = any_failed;
  if (!write_text(out_dir / "spectrum.csv", csv.str())) return kExitIo;
  if (!write_text(out_dir / "spectrum_summary.json", summary.dump(2) + "\n"))
    return kExitIo;
  return any_failed ? kExitNumerical : kExitOk;
}

int cmd_asymptotics(const RunConfig& cfg) {
  if (const std::string err = cfg.validate(); !err.empty()) {
    std::cerr << "config error: " << err << "\n";
    return kExitConfig;
  }
  if (cfg.k_max < 8 || cfg.l_max < 8) {
    std::cerr << "config error: asymptotics needs scan bounds >= 8 "
                 "(--kmax/--lmax)\n";
    return kExitConfig;
  }
  fs::path out_dir;
  if (int rc = prepare_out_dir(cfg, out_dir); rc != kExitOk) return rc;

  const auto xis = sorted_xis(cfg);
  const auto spec = cfg.quad_spec();
  // The empirical sign-flip index l-hat grows with the fixed toroidal index
  // (roughly 1.5k at xi = 0.5), so only scan fixed k the range can resolve.
  std::vector<int> fixed_ks;
  for (int k : {0, 3, 12})
    if (k <= cfg.l_max / 2) fixed_ks.push_back(k);

  std::vector<asympt::CertificationResult> results(xis.size());
  parallel_for(xis.size(), cfg.jobs, [&](std::size_t i) {
    const TorusShape shape(xis[i], 1.0);
    results[i] =
        asympt::certify_signs(shape, cfg.k_max, cfg.l_max, spec, fixed_ks);
  });

  std::ostringstream csv;
  csv << "xi,axis,index,I_value,lead_pred,ratio,margin\n";
  json certs = json::array();
  auto emit = [&](double xi, const std::string& axis,
                  const asympt::SignCertificate& c, const TorusShape& shape,
                  bool positive) {
    std::ostringstream plot;
    for (std::size_t i = 0; i < c.indices.size(); ++i) {
      const int n = static_cast<int>(c.indices[i]);
      const double lead = positive ? asympt::lead_I_k0(shape, n)
                                   : asympt::lead_I_l(shape, n);
      csv << format_g17(xi) << ',' << axis << ',' << n << ','
          << format_g17(c.values[i]) << ',' << format_g17(lead) << ','
          << format_g17(c.ratios[i]) << ',' << format_g17(c.margins[i])
          << '\n';
      plot << n << ' ' << format_g17(c.ratios[i]) << '\n';
    }
    json jc;
    jc["xi"] = xi;
    jc["axis"] = axis;
    jc["threshold"] = c.threshold;
    jc["certified"] = c.certified;
    jc["ratio_at_max_index"] = c.ratios.back();
    jc["leading_constant_check"] = c.leading_constant_check;
    double min_margin = 0.0;
    if (c.certified) {
      min_margin = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < c.indices.size(); ++i)
        if (c.indices[i] >= c.threshold)
          min_margin = std::min(min_margin, c.margins[i]);
    }
    jc["min_margin_from_threshold"] = min_margin;
    certs.push_back(jc);
    return plot.str();
  };

  for (std::size_t i = 0; i < xis.size(); ++i) {
    const TorusShape shape(xis[i], 1.0);
    const std::string xitag = format_g17(xis[i]);
    std::string plot =
        emit(xis[i], "k", results[i].positive_axis, shape, true);
    if (!write_text(out_dir / ("plot_kaxis_xi" + xitag + ".dat"), plot))
      return kExitIo;
    for (const auto& c : results[i].negative_axes) {
      plot = emit(xis[i], "l:k=" + std::to_string(c.fixed_k), c, shape,
                  false);
      if (!write_text(out_dir / ("plot_laxis_k" + std::to_string(c.fixed_k) +
                                 "_xi" + xitag + ".dat"),
                      plot))
        return kExitIo;
    }
  }
  if (!write_text(out_dir / "asymptotics.csv", csv.str())) return kExitIo;
  json certdoc;
  certdoc["certificates"] = certs;
  if (!write_text(out_dir / "certificates.json", certdoc.dump(2) + "\n"))
    return kExitIo;

  bool all_certified = true;
  for (const auto& c : certs)
    all_certified = all_certified && c["certified"].get<bool>();
  return all_certified ? kExitOk : kExitNumerical;
}

int cmd_convergence(const RunConfig& cfg) {
  if (const std::string err = cfg.validate(); !err.empty()) {
    std::cerr << "config error: " << err << "\n";
    return kExitConfig;
  }
  fs::path out_dir;
  if (int rc = prepare_out_dir(cfg, out_dir); rc != kExitOk) return rc;

  std::vector<int> L_seq;
  for (int L = 8; L <= cfg.L; L *= 2) L_seq.push_back(L);
  if (L_seq.empty()) L_seq.push_back(cfg.L);

  std::vector<int> ks{0};
  if (cfg.k_max > 0) ks.push_back(cfg.k_max);

  const auto spec = cfg.quad_spec();
  std::ostringstream csv;
  csv << "xi,k,L,lambda_np_top,lambda_np_bottom,top_delta,bottom_delta,"
         "positive_count,negative_count\n";
  for (double xi : sorted_xis(cfg)) {
    const TorusShape shape(xi, 1.0);
    for (int k : ks) {
      const auto rows = spectral::convergence_study(shape, k, L_seq, spec);
      for (const auto& r : rows)
        csv << format_g17(xi) << ',' << k << ',' << r.L << ','
            << format_g17(r.top) << ',' << format_g17(r.bottom) << ','
            << format_g17(r.top_delta) << ',' << format_g17(r.bottom_delta)
            << ',' << r.positive_count << ',' << r.negative_count << '\n';
    }
  }
  if (!write_text(out_dir / "convergence.csv", csv.str())) return kExitIo;
  return kExitOk;
}

}  // namespace nptorus::cli
