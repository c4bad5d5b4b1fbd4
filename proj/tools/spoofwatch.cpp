// spoofwatch: reconstruct, calibrate, optimize, monitor, simulate, gof.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "json.hpp"
#include "spoofwatch/calibration.hpp"
#include "spoofwatch/config.hpp"
#include "spoofwatch/detector.hpp"
#include "spoofwatch/error.hpp"
#include "spoofwatch/event_csv.hpp"
#include "spoofwatch/imbalance.hpp"
#include "spoofwatch/liquidity.hpp"
#include "spoofwatch/model_io.hpp"
#include "spoofwatch/optimizer.hpp"
#include "spoofwatch/synth_market.hpp"
#include "spoofwatch/timeline.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace spoofwatch;

namespace {

const std::set<std::string> kKnownKeys = {
    "instrument", "tick_size", "seed", "out",
    "paths.events", "paths.model", "paths.labels", "paths.train_events",
    "reconstruct.depth",
    "sample.target_variance", "sample.candidates", "sample.depth_quantile", "sample.f",
    "mle.starts", "mle.max_evals", "mle.objective", "mle.outer_iters", "mle.min_samples",
    "gof.buckets",
    "optimize.ibar", "optimize.rho", "optimize.a", "optimize.ask_price", "optimize.mu_plus", "optimize.w",
    "optimize.Q", "optimize.nu", "optimize.curve_points",
    "round_trip.Delta", "round_trip.k", "round_trip.w", "round_trip.Q", "round_trip.a", "round_trip.mu_plus",
    "round_trip.points",
    "monitor.f", "monitor.post_window", "monitor.side", "monitor.window", "monitor.buckets",
    "monitor.repetitions", "monitor.consecutive", "monitor.min_marks",
    "sim.a", "sim.b", "sim.levels", "sim.horizon", "sim.period", "sim.mo_rate", "sim.volume_shape",
    "sim.ref_price", "sim.episode_starts", "sim.episode_length", "sim.spoof_rho", "sim.spoof_depths",
    "sim.spoof_delay", "sim.fixed_imbalance",
};

std::string num(double v) { return fmt::format("{:.17g}", v); }

class Run {
 public:
  Run(Config cfg, fs::path out) : cfg_(std::move(cfg)), out_(std::move(out)) {
    for (const auto& k : cfg_.keys())
      if (!kKnownKeys.count(k)) throw Error(ErrorCode::ConfigError, "unknown key '" + k + "'");
    tick_ = cfg_.get_double("tick_size", 0.01);
    if (!(tick_ > 0.0)) throw Error(ErrorCode::ConfigError, "tick_size must be positive");
    seed_ = cfg_.get_u64("seed", 1);
    fs::create_directories(out_);
  }

  void reconstruct() {
    const auto depth = static_cast<std::size_t>(cfg_.get_int("reconstruct.depth", 10));
    const BookTimeline tl = load_timeline(depth);
    auto book = open("book.csv");
    book << "t_ns,best_bid,best_ask,mid";
    for (std::size_t k = 0; k <= depth; ++k) book << ",bid_" << k;
    for (std::size_t k = 0; k <= depth; ++k) book << ",ask_" << k;
    book << "\n";
    for (std::size_t i = 0; i < tl.size(); ++i) {
      book << tl.time(i) << ',' << tl.best_bid(i) << ',' << tl.best_ask(i) << ',' << num(tl.mid(i));
      for (double v : tl.bid(i)) book << ',' << num(v);
      for (double v : tl.ask(i)) book << ',' << num(v);
      book << "\n";
    }
    auto mo = open("market_orders.csv");
    mo << "t_ns,side,volume,depth\n";
    for (const auto& m : tl.market_orders) {
      mo << m.timestamp << ',' << (m.aggressor == Side::Bid ? 'B' : 'S') << ',' << m.volume << ',';
      if (m.pre) {
        const auto& side = m.aggressor == Side::Bid ? m.pre->ask : m.pre->bid;
        try {
          mo << tick_depth(side, static_cast<double>(m.volume));
        } catch (const Error&) {
        }
      }
      mo << "\n";
    }
    json s;
    s["instrument"] = instrument_;
    s["states"] = tl.size();
    s["market_orders"] = tl.market_orders.size();
    s["one_sided_states"] = tl.one_sided_states;
    write_json("reconstruct.json", s);
  }

  void calibrate_cmd() {
    CalibrationConfig cc;
    cc.tick_size = tick_;
    cc.sample.target_variance = cfg_.get_double("sample.target_variance", cc.sample.target_variance);
    cc.sample.candidate_frequencies = cfg_.get_doubles("sample.candidates", cc.sample.candidate_frequencies);
    cc.sample.depth_quantile = cfg_.get_double("sample.depth_quantile", cc.sample.depth_quantile);
    if (cfg_.has("sample.f")) cc.sample.candidate_frequencies = {cfg_.get_double("sample.f", 1.0)};
    cc.mle = mle_options();
    cc.gof_buckets = static_cast<int>(cfg_.get_int("gof.buckets", cc.gof_buckets));
    const BookTimeline tl = load_timeline(10);
    const CalibrationResult r = calibrate(tl, cc);

    json j;
    j["instrument"] = instrument_;
    j["f"] = r.f;
    j["depth"] = r.depth;
    j["samples"] = r.samples;
    j["frequency_variance"] = json::array();
    for (const auto& fs : r.frequency_samples) j["frequency_variance"].push_back({{"f", fs.f}, {"variance", variance(fs.changes)}, {"n", fs.changes.size()}});
    j["dq"] = {{"distribution", dist_json(r.dq.dq)}, {"used", r.dq.used}, {"skipped", r.dq.skipped}};
    j["weights"] = r.mle.weights.w;
    j["dp_plus"] = dist_json(r.mle.dp_plus);
    j["moments"] = {{"mu_plus", r.mle.moments.mu_plus}, {"variance", r.mle.moments.variance},
                    {"skewness", r.mle.moments.skewness}, {"kurtosis", r.mle.moments.kurtosis}};
    j["skew_normal"] = {{"alpha", r.mle.skew.params.alpha}, {"xi", r.mle.skew.params.xi},
                        {"omega", r.mle.skew.params.omega}, {"log_likelihood", r.mle.skew.log_likelihood}};
    j["conditional_nll"] = r.mle.conditional_nll;
    j["neg_log_likelihood"] = r.mle.neg_log_likelihood;
    j["converged"] = r.mle.converged;
    j["evals"] = r.mle.evals;
    j["best_start"] = r.mle.best_start;
    int pass = 0;
    for (const auto& g : r.gof) pass += g.p_value >= 0.05;
    j["gof_passed"] = pass;
    j["gof_buckets"] = r.gof.size();
    write_json("calibration.json", j);
    write_gof(r.gof);

    const MarketModel m = r.model(tick_);
    nlohmann::json mj = m;
    write_text("model.json", mj.dump(2) + "\n");
  }

  void optimize() {
    SpoofParams p;
    MarketModel model;
    const bool explicit_depths = cfg_.has("optimize.w");
    if (!explicit_depths) {
      model = load_model_cfg();
      p.depths = depth_params(model);
      p.mu_plus = model.mu_plus();
      p.tick_size = model.tick_size;
    } else {
      const auto w = cfg_.get_doubles("optimize.w", {});
      const auto Q = cfg_.get_doubles("optimize.Q", {});
      const auto nu = cfg_.get_doubles("optimize.nu", {});
      if (Q.size() != w.size() || nu.size() != w.size())
        throw Error(ErrorCode::ConfigError, "optimize.w, optimize.Q and optimize.nu must have equal length");
      for (std::size_t k = 0; k < w.size(); ++k) p.depths.push_back({w[k], Q[k], nu[k]});
      p.tick_size = tick_;
      if (!cfg_.has("optimize.mu_plus")) throw Error(ErrorCode::ConfigError, "optimize.mu_plus is required with optimize.w");
    }
    p.mu_plus = cfg_.get_double("optimize.mu_plus", p.mu_plus);
    p.ibar = cfg_.get_double("optimize.ibar", 0.5);
    p.rho = cfg_.get_double("optimize.rho", 1.0);
    p.a = cfg_.get_double("optimize.a", 100.0);
    p.ask_price = cfg_.get_double("optimize.ask_price", 0.0);
    p.validate();

    const AdmitsReport ns = admits_spoofing(p);
    auto out = open("optimize.csv");
    out << "depth,w,Q,nu,ns_margin,ns_violated,v_spoof,v_over_a,i_spoof,expected_cost,capped,fixed_point_residual\n";
    for (std::size_t k = 0; k < p.depths.size(); ++k) {
      const SpoofSolution s = optimal_spoof_at_depth(p, k);
      out << k << ',' << num(p.depths[k].w) << ',' << num(p.depths[k].Q) << ',' << num(p.depths[k].nu) << ','
          << num(ns.margin[k]) << ',' << (ns.admits[k] ? 1 : 0) << ',' << num(s.v_spoof) << ','
          << num(s.v_spoof / p.a) << ',' << num(s.i_spoof) << ',' << num(s.expected_cost) << ','
          << (s.capped ? 1 : 0) << ',' << num(fixed_point_residual(p, s)) << "\n";
    }
    const MultiSpoofSolution multi = optimal_spoof_multi(p);
    json j;
    j["ns_regime"] = std::string(ns_regime_name(ns.regime));
    j["any_depth_admits"] = ns.any;
    j["multi"] = {{"v", multi.v}, {"i_spoof", multi.i_spoof}, {"expected_cost", multi.expected_cost},
                  {"best_single_depth", multi.best_single}, {"iterations", multi.iterations},
                  {"converged", multi.converged}};
    write_json("optimize.json", j);

    const auto n = cfg_.get_int("optimize.curve_points", 99);
    auto curve = open("spoof_curve.csv");
    curve << "ibar,depth,i_spoof,v_over_a\n";
    for (std::int64_t i = 1; i <= n; ++i) {
      SpoofParams q = p;
      q.ibar = static_cast<double>(i) / static_cast<double>(n + 1);
      for (std::size_t k = 0; k < q.depths.size(); ++k) {
        const SpoofSolution s = optimal_spoof_at_depth(q, k);
        curve << num(q.ibar) << ',' << k << ',' << num(s.i_spoof) << ',' << num(s.v_spoof / q.a) << "\n";
      }
    }

    if (cfg_.has("round_trip.Delta")) {
      RoundTripInput in;
      in.Delta = cfg_.get_double("round_trip.Delta", 0.0);
      in.k = cfg_.get_double("round_trip.k", 1.0);
      in.w = cfg_.get_double("round_trip.w", 0.5);
      in.Q = cfg_.get_double("round_trip.Q", 0.0);
      in.a = cfg_.get_double("round_trip.a", p.a);
      in.mu_plus = cfg_.get_double("round_trip.mu_plus", p.mu_plus);
      const auto m = cfg_.get_int("round_trip.points", 99);
      auto rt = open("round_trip.csv");
      rt << "ibar,H_star,v_star,revenue,i_spoof,regime\n";
      for (std::int64_t i = 1; i <= m; ++i) {
        in.ibar = static_cast<double>(i) / static_cast<double>(m + 1);
        const RoundTripSolution s = round_trip_optimal(in);
        rt << num(in.ibar) << ',' << num(s.H_star) << ',' << num(s.v_star) << ',' << num(s.revenue) << ','
           << num(s.i_spoof) << ',' << regime_name(s.regime) << "\n";
      }
    }
  }

  void monitor_cmd() {
    const MarketModel model = load_model_cfg();
    MarkConfig mc;
    mc.f = cfg_.get_double("monitor.f", 1.0);
    mc.post_window = cfg_.get_double("monitor.post_window", 1.0);
    const std::string side = cfg_.get_string("monitor.side", "buy");
    if (side != "buy" && side != "sell") throw Error(ErrorCode::ConfigError, "monitor.side must be buy or sell");
    mc.side = side == "buy" ? Side::Bid : Side::Ask;
    const std::size_t depth = std::max<std::size_t>(model.weights.depth(), 1);

    const BookTimeline tl = load_timeline(depth);
    MarkStats st;
    const auto marks = mark_market_orders(tl, model, mc, &st);
    spdlog::info("{} marks ({} underflow, {} empty windows)", marks.size(), st.underflow, st.empty);

    std::vector<MarketOrderMark> train;
    const std::string train_path = cfg_.get_string("paths.train_events", "");
    if (!train_path.empty()) {
      const auto ev = read_events(require_file(train_path), tick_);
      train = mark_market_orders(build_timeline(ev, tick_, depth), model, mc);
    } else {
      train = marks;
    }
    const JointFit fit =
        fit_joint_kernels(train, static_cast<std::size_t>(cfg_.get_int("monitor.min_marks", 1000)));

    MonitorConfig cfg;
    cfg.window = static_cast<std::size_t>(cfg_.get_int("monitor.window", 100));
    cfg.buckets = static_cast<std::size_t>(cfg_.get_int("monitor.buckets", 5));
    cfg.repetitions = static_cast<int>(cfg_.get_int("monitor.repetitions", 10));
    cfg.consecutive = static_cast<int>(cfg_.get_int("monitor.consecutive", 10));
    cfg.seed = seed_;
    const auto points = monitor(marks, fit, model, cfg);

    auto mk = open("marks.csv");
    mk << "t_ns,i_minus,i_plus,a_t,b_t,rho_t,i_spoof,volume\n";
    for (const auto& m : marks)
      mk << m.t << ',' << num(m.i_minus) << ',' << num(m.i_plus) << ',' << num(m.a_t) << ',' << num(m.b_t) << ','
         << num(m.rho_t) << ',' << num(m.i_spoof) << ',' << m.volume << "\n";
    auto mo = open("monitor.csv");
    mo << "t,d_legit,d_spoof,no_spoof_region,flagged\n";
    for (const auto& p : points)
      mo << p.t << ',' << num(p.d_legit) << ',' << num(p.d_spoof) << ',' << (p.no_spoof_region ? 1 : 0) << ','
         << (p.flagged ? 1 : 0) << "\n";

    json j;
    j["instrument"] = instrument_;
    j["side"] = side;
    j["marks"] = marks.size();
    j["points"] = points.size();
    std::size_t flagged = 0, region = 0;
    for (const auto& p : points) {
      flagged += p.flagged;
      region += p.no_spoof_region;
    }
    j["flagged_points"] = flagged;
    j["no_spoof_region_points"] = region;
    j["legit_kernel"] = {{"mu1", fit.legit.mu1}, {"mu2", fit.legit.mu2}, {"sigma1", fit.legit.s1},
                         {"sigma2", fit.legit.s2}, {"r", fit.legit.r}};
    j["spoof_kernel"] = {{"alpha1", fit.spoofed.alpha1}, {"alpha2", fit.spoofed.alpha2}, {"xi1", fit.spoofed.xi1},
                         {"xi2", fit.spoofed.xi2}, {"omega11", fit.spoofed.o11}, {"omega12", fit.spoofed.o12},
                         {"omega22", fit.spoofed.o22}};
    j["flag_episodes"] = json::array();
    for (const auto& e : flag_episodes(points))
      j["flag_episodes"].push_back({{"start_ns", e.start}, {"end_ns", e.end}, {"points", e.points}});

    const std::string labels_path = cfg_.get_string("paths.labels", "");
    if (!labels_path.empty()) {
      std::ifstream in(require_file(labels_path));
      const auto lj = nlohmann::json::parse(in);
      std::vector<std::pair<TimeNs, TimeNs>> eps;
      for (const auto& e : lj.at("episodes")) eps.emplace_back(e.at("start_ns").get<TimeNs>(), e.at("end_ns").get<TimeNs>());
      std::size_t in_n = 0, in_f = 0, out_n = 0, out_f = 0;
      for (const auto& p : points) {
        const bool inside = std::any_of(eps.begin(), eps.end(), [&](const auto& e) { return p.t >= e.first && p.t < e.second; });
        (inside ? in_n : out_n) += 1;
        (inside ? in_f : out_f) += p.flagged;
      }
      j["labeled"] = {{"points_inside", in_n}, {"flag_rate_inside", in_n ? static_cast<double>(in_f) / in_n : 0.0},
                      {"points_outside", out_n}, {"flag_rate_outside", out_n ? static_cast<double>(out_f) / out_n : 0.0}};
    }
    write_json("monitor_summary.json", j);
  }

  void simulate_cmd() {
    SimConfig sc;
    sc.model = load_model_cfg();
    sc.a = cfg_.get_double("sim.a", sc.a);
    sc.b = cfg_.get_double("sim.b", sc.b);
    sc.levels = static_cast<std::size_t>(cfg_.get_int("sim.levels", static_cast<std::int64_t>(sc.levels)));
    sc.horizon = cfg_.get_int("sim.horizon", sc.horizon);
    sc.period = cfg_.get_double("sim.period", sc.period);
    sc.mo_rate = cfg_.get_double("sim.mo_rate", sc.mo_rate);
    sc.volume_shape = cfg_.get_double("sim.volume_shape", sc.volume_shape);
    sc.ref_price = cfg_.get_int("sim.ref_price", sc.ref_price);
    sc.spoof_delay = cfg_.get_double("sim.spoof_delay", sc.spoof_delay);
    if (cfg_.has("sim.fixed_imbalance")) sc.fixed_imbalance = cfg_.get_double("sim.fixed_imbalance", 0.0);
    sc.seed = seed_;
    const auto starts = cfg_.get_ints("sim.episode_starts", {});
    const auto len = cfg_.get_int("sim.episode_length", 400);
    std::vector<std::size_t> depths;
    for (auto d : cfg_.get_ints("sim.spoof_depths", {})) {
      if (d < 0) throw Error(ErrorCode::ConfigError, "sim.spoof_depths must be non-negative");
      depths.push_back(static_cast<std::size_t>(d));
    }
    for (auto s : starts) sc.episodes.push_back({s, s + len, depths, cfg_.get_double("sim.spoof_rho", 0.8)});
    if (sc.model.tick_size != tick_)
      spdlog::warn("model tick size {} differs from config tick size {}; using the model's", sc.model.tick_size, tick_);

    auto out = open("events.csv");
    EventCsvWriter w(out, sc.model.tick_size);
    const SimLabels labels = simulate(sc, [&](const OrderEvent& ev) { w.write(ev); });
    write_text("labels.json", labels_json(labels));
  }

  void gof_cmd() {
    const MarketModel model = load_model_cfg();
    const int depth = static_cast<int>(model.weights.depth());
    const BookTimeline tl = load_timeline(static_cast<std::size_t>(depth));
    double f = cfg_.get_double("sample.f", 0.0);
    if (!(f > 0.0)) {
      std::vector<FrequencySample> fs;
      for (double c : cfg_.get_doubles("sample.candidates", SampleConfig{}.candidate_frequencies))
        fs.push_back({c, sample_price_changes(tl, c)});
      f = select_frequency(fs, cfg_.get_double("sample.target_variance", SampleConfig{}.target_variance));
    }
    const int support = std::max(model.dp_plus.hi(), -model.dp_plus.lo);
    const JointSamples s = build_joint_samples(tl, f, static_cast<std::size_t>(depth), support);
    const auto imb = s.imbalances(model.weights.w);
    write_gof(chi_square_gof(model.dp_plus, imb, s.x, static_cast<int>(cfg_.get_int("gof.buckets", 20))));
  }

  std::string instrument_ = "UNNAMED";

 private:
  MleOptions mle_options() const {
    MleOptions o;
    o.starts = static_cast<int>(cfg_.get_int("mle.starts", o.starts));
    o.max_evals = static_cast<int>(cfg_.get_int("mle.max_evals", o.max_evals));
    o.outer_iters = static_cast<int>(cfg_.get_int("mle.outer_iters", o.outer_iters));
    o.min_samples = static_cast<std::size_t>(cfg_.get_int("mle.min_samples", static_cast<std::int64_t>(o.min_samples)));
    o.seed = seed_;
    const std::string obj = cfg_.get_string("mle.objective", "conditional");
    if (obj == "conditional") {
      o.objective = MleObjective::Conditional;
    } else if (obj == "joint") {
      o.objective = MleObjective::Joint;
    } else {
      throw Error(ErrorCode::ConfigError, "mle.objective must be conditional or joint");
    }
    return o;
  }

  std::string require_file(const std::string& path) const {
    if (!fs::exists(path)) throw Error(ErrorCode::IoError, "no such file: " + path);
    return path;
  }

  std::string require_key(const std::string& key) const {
    const std::string v = cfg_.get_string(key, "");
    if (v.empty()) throw Error(ErrorCode::ConfigError, key + " is required");
    return v;
  }

  BookTimeline load_timeline(std::size_t depth) const {
    const auto events = read_events(require_file(require_key("paths.events")), tick_);
    spdlog::info("read {} events", events.size());
    return build_timeline(events, tick_, depth);
  }

  MarketModel load_model_cfg() const { return load_model(require_file(require_key("paths.model"))); }

  std::ofstream open(const std::string& name) const {
    std::ofstream f(out_ / name, std::ios::binary);
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + (out_ / name).string());
    return f;
  }

  void write_text(const std::string& name, const std::string& text) const {
    auto f = open(name);
    f << text;
  }

  void write_json(const std::string& name, const json& j) const { write_text(name, j.dump(2) + "\n"); }

  void write_gof(const std::vector<GofBucket>& gof) const {
    auto out = open("gof.csv");
    out << "bucket,ibar,n,statistic,dof,p_value,pooled,sparse\n";
    for (std::size_t l = 0; l < gof.size(); ++l) {
      const auto& g = gof[l];
      out << l << ',' << num(g.ibar) << ',' << g.n << ',' << num(g.statistic) << ',' << g.dof << ','
          << num(g.p_value) << ',' << (g.pooled ? 1 : 0) << ',' << (g.sparse ? 1 : 0) << "\n";
    }
  }

  static json dist_json(const PriceDist& d) { return {{"lo", d.lo}, {"probs", d.probs}}; }

  static double variance(const std::vector<double>& x) {
    if (x.size() < 2) return 0.0;
    double m = 0.0;
    for (double v : x) m += v;
    m /= static_cast<double>(x.size());
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
  }

  Config cfg_;
  fs::path out_;
  double tick_ = 0.01;
  std::uint64_t seed_ = 1;
};

void setup_logging() {
  auto logger = spdlog::stderr_logger_st("spoofwatch");
  spdlog::set_default_logger(logger);
  const char* lvl = std::getenv("SPOOFWATCH_LOG");
  spdlog::set_level(lvl ? spdlog::level::from_str(lvl) : spdlog::level::warn);
}

// Pulls "--section.key value" and "--section.key=value" overrides out of argv.
std::vector<std::pair<std::string, std::string>> take_overrides(std::vector<std::string>& args) {
  std::vector<std::pair<std::string, std::string>> out;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) == 0 && a.find('.', 2) != std::string::npos) {
      const std::string body = a.substr(2);
      const auto eq = body.find('=');
      if (eq != std::string::npos) {
        out.emplace_back(body.substr(0, eq), body.substr(eq + 1));
      } else {
        if (i + 1 >= args.size()) throw Error(ErrorCode::ConfigError, "missing value for " + a);
        out.emplace_back(body, args[++i]);
      }
    } else {
      rest.push_back(a);
    }
  }
  args = std::move(rest);
  return out;
}

int report(const Error& e) {
  json j{{"error", std::string(error_code_name(e.code()))}, {"message", e.what()}};
  std::cerr << j.dump() << "\n";
  return e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::IoError ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::pair<std::string, std::string>> overrides;
  try {
    overrides = take_overrides(args);
  } catch (const Error& e) {
    return report(e);
  }

  CLI::App app{"Limit-order-book spoofing model: calibration, optimal spoofing and monitoring"};
  std::string config_path, out_dir, instrument;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "TOML config file");
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--instrument", instrument, "instrument name");
  app.require_subcommand(1);
  auto* c_reconstruct = app.add_subcommand("reconstruct", "rebuild book states and market orders from events");
  auto* c_calibrate = app.add_subcommand("calibrate", "fit the price-impact model");
  auto* c_optimize = app.add_subcommand("optimize", "optimal spoofing volumes per depth");
  auto* c_monitor = app.add_subcommand("monitor", "run the spoofing monitor");
  auto* c_simulate = app.add_subcommand("simulate", "generate a labeled synthetic stream");
  auto* c_gof = app.add_subcommand("gof", "goodness of fit of a model on a stream");
  // global options are accepted after the subcommand too
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    Config cfg = config_path.empty() ? Config{} : Config::load(config_path);
    for (const auto& [k, v] : overrides) cfg.set(k, v);
    if (*seed_opt) cfg.set("seed", std::to_string(seed));
    if (!out_dir.empty()) cfg.set_string("out", out_dir);
    const fs::path out = cfg.get_string("out", "out");
    Run run(cfg, out);
    run.instrument_ = instrument.empty() ? cfg.get_string("instrument", "UNNAMED") : instrument;

    if (*c_reconstruct) run.reconstruct();
    if (*c_calibrate) run.calibrate_cmd();
    if (*c_optimize) run.optimize();
    if (*c_monitor) run.monitor_cmd();
    if (*c_simulate) run.simulate_cmd();
    if (*c_gof) run.gof_cmd();
  } catch (const Error& e) {
    return report(e);
  } catch (const nlohmann::json::exception& e) {
    return report(Error(ErrorCode::ParseError, e.what()));
  } catch (const std::filesystem::filesystem_error& e) {
    return report(Error(ErrorCode::IoError, e.what()));
  }
  return 0;
}
