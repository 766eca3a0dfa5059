// Copyright 2026 The localpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "localpriv/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "localpriv/io.hpp"

namespace localpriv::cli {

namespace {

using nlohmann::json;

std::string sha256_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kMissingInput, "cannot open '" + path + "'");
  }
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) {
      EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
    }
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

// Accumulates the command echo, input digests and timing for one CliReport.
class Report {
 public:
  explicit Report(const std::vector<std::string>& args)
      : start_(std::chrono::steady_clock::now()) {
    std::string cmd = "localpriv";
    for (const auto& a : args) {
      cmd += ' ';
      cmd += a;
    }
    command_ = std::move(cmd);
  }

  void add_input(const std::string& path) { inputs_[path] = sha256_hex(path); }

  void emit(json result, std::ostream& out) const {
    const auto elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start_)
                             .count();
    json report;
    report["command"] = command_;
    report["inputs"] = inputs_;
    report["result"] = std::move(result);
    report["version"] = kVersion;
    report["duration_seconds"] = elapsed;
    out << report.dump(2) << '\n';
  }

 private:
  std::string command_;
  json inputs_ = json::object();
  std::chrono::steady_clock::time_point start_;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> grid;
  for (const auto& item : split_list(s)) {
    try {
      std::size_t pos = 0;
      grid.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument,
                  "'" + item + "' is not a number in the eps grid");
    }
  }
  return grid;
}

json anonymity_class_to_json(const std::vector<std::size_t>& rows) {
  json out = json::array();
  for (std::size_t r : rows) out.push_back(r);
  return out;
}

struct AuditArgs {
  std::string notion;
  std::string channel_path;
  std::string prior_path;
  std::string metric_path;
  std::string secrets_path;
  double eps = -1.0;
  bool eps_set = false;
};

AuditReport dispatch_audit(const AuditArgs& a, Report& report) {
  const Channel c = load_channel(a.channel_path);
  report.add_input(a.channel_path);
  const Notion notion = notion_from_string(a.notion);

  auto need_prior = [&]() {
    if (a.prior_path.empty()) {
      throw Error(ErrorCode::kMissingInput,
                  "audit " + a.notion + " requires --prior");
    }
    report.add_input(a.prior_path);
    return load_prior(a.prior_path);
  };
  auto need_eps = [&]() {
    if (!a.eps_set) {
      throw Error(ErrorCode::kMissingInput,
                  "audit " + a.notion + " requires --eps");
    }
    return a.eps;
  };

  switch (notion) {
    case Notion::kLdp:
      return audit_ldp(c);
    case Notion::kLdpDelta:
      return audit_ldp_delta(c, need_eps());
    case Notion::kLip:
      return audit_lip(c, need_prior());
    case Notion::kLipDelta: {
      const Prior p = need_prior();
      return audit_lip_delta(c, p, need_eps());
    }
    case Notion::kLmip:
      return audit_lmip(c, need_prior());
    case Notion::kDi:
      return audit_di(c, need_prior());
    case Notion::kMil:
      return audit_mil(c);
    case Notion::kPufferfish: {
      if (a.secrets_path.empty()) {
        throw Error(ErrorCode::kMissingInput,
                    "audit pufferfish requires --secrets");
      }
      report.add_input(a.secrets_path);
      return audit_pufferfish(c, load_secret_model(a.secrets_path));
    }
    case Notion::kGeo: {
      if (a.metric_path.empty()) {
        throw Error(ErrorCode::kMissingInput, "audit geo requires --metric");
      }
      report.add_input(a.metric_path);
      return audit_geo(c, load_metric(a.metric_path));
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unreachable notion");
}

struct DesignArgs {
  std::string family;
  std::size_t k = 0;
  std::string labels;
  double eps = 0.0;
  bool eps_set = false;
  double p_truth = -1.0;
  bool p_truth_set = false;
  long grid_min = 0;
  long grid_max = 0;
  bool grid_set = false;
  std::string prior_path;
  std::string metric_path;
  std::string secrets_path;
  std::string distortion_path;
  std::string out_path;
};

Alphabet design_alphabet(const DesignArgs& a) {
  if (!a.labels.empty()) {
    Alphabet alpha;
    alpha.symbols = split_list(a.labels);
    validate_alphabet(alpha);
    return alpha;
  }
  if (a.k == 0) {
    throw Error(ErrorCode::kMissingInput,
                "design " + a.family + " requires --k or --labels");
  }
  return Alphabet::indexed("x", a.k);
}

double require_eps(const DesignArgs& a) {
  if (!a.eps_set) {
    throw Error(ErrorCode::kMissingInput,
                "design " + a.family + " requires --eps");
  }
  return a.eps;
}

void dispatch_design(const DesignArgs& a, Report& report, std::ostream& out) {
  Channel channel;
  json extra = json::object();

  if (a.family == "krr") {
    channel = make_rr(design_alphabet(a), require_eps(a));
  } else if (a.family == "oue") {
    channel = make_oue(design_alphabet(a), require_eps(a));
  } else if (a.family == "sampling") {
    if (a.prior_path.empty()) {
      throw Error(ErrorCode::kMissingInput, "design sampling requires --prior");
    }
    if (!a.p_truth_set) {
      throw Error(ErrorCode::kMissingInput,
                  "design sampling requires --p-truth");
    }
    report.add_input(a.prior_path);
    channel = make_sampling(load_prior(a.prior_path), a.p_truth);
  } else if (a.family == "geometric") {
    if (!a.grid_set) {
      throw Error(ErrorCode::kMissingInput,
                  "design geometric requires --grid-min and --grid-max");
    }
    channel = make_geometric(Alphabet::integer_grid(a.grid_min, a.grid_max),
                             require_eps(a));
  } else if (a.family == "geo-exp") {
    if (a.metric_path.empty()) {
      throw Error(ErrorCode::kMissingInput, "design geo-exp requires --metric");
    }
    report.add_input(a.metric_path);
    channel = make_geo_exp(load_metric(a.metric_path), require_eps(a));
  } else if (a.family == "mip-optimal") {
    if (a.prior_path.empty() || a.distortion_path.empty()) {
      throw Error(ErrorCode::kMissingInput,
                  "design mip-optimal requires --prior and --distortion");
    }
    report.add_input(a.prior_path);
    report.add_input(a.distortion_path);
    const MipSolution sol =
        design_mip_channel(load_prior(a.prior_path),
                           load_distortion(a.distortion_path), require_eps(a));
    channel = sol.channel;
    extra["mutual_information"] = sol.mutual_information;
    extra["expected_distortion"] = sol.expected_distortion;
    extra["iterations"] = sol.iterations;
  } else if (a.family == "wasserstein") {
    if (a.secrets_path.empty()) {
      throw Error(ErrorCode::kMissingInput,
                  "design wasserstein requires --secrets");
    }
    report.add_input(a.secrets_path);
    const SecretModel sm = load_secret_model(a.secrets_path);
    Alphabet grid;
    if (a.grid_set) {
      grid = Alphabet::integer_grid(a.grid_min, a.grid_max);
    } else {
      const Alphabet data = ensure_embedding(sm.data);
      double lo = data.embedding->front();
      double hi = lo;
      for (double v : *data.embedding) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      grid = Alphabet::integer_grid(static_cast<long>(std::floor(lo)),
                                    static_cast<long>(std::ceil(hi)));
    }
    channel = make_wasserstein(sm, require_eps(a), grid);
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown design family '" + a.family + "'");
  }

  save_channel(channel, a.out_path);
  json result;
  result["family"] = a.family;
  result["path"] = a.out_path;
  result["channel"] = channel_to_json(channel);
  if (!extra.empty()) result["diagnostics"] = std::move(extra);
  report.emit(std::move(result), out);
}

struct SampleArgs {
  std::string channel_path;
  std::string input;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string mechanism = "krr";
  double eps = 0.0;
  bool eps_set = false;
  std::string out_path;
};

void dispatch_sample(const SampleArgs& a, Report& report, std::ostream& out) {
  const Channel c = load_channel(a.channel_path);
  report.add_input(a.channel_path);

  ReportBatch batch;
  batch.mechanism = mechanism_from_string(a.mechanism);
  if (a.eps_set) {
    batch.epsilon = a.eps;
  } else {
    // A well-formed KRR/OUE channel re-audits to its construction budget, so
    // the audited value stamps the sidecar when --eps is omitted.
    const AuditReport audited = audit_ldp(c);
    if (audited.epsilon.is_infinite()) {
      throw Error(ErrorCode::kMissingInput,
                  "channel has unbounded LDP budget; pass --eps explicitly");
    }
    batch.epsilon = audited.epsilon.value();
  }

  const std::vector<std::string> reports = sample(c, a.input, a.n, a.seed);
  if (batch.mechanism == MechanismKind::kKrr) {
    batch.alphabet = c.output;
    batch.krr_reports = reports;
  } else {
    batch.alphabet = c.input;
    const std::size_t k = c.input.size();
    for (const auto& label : reports) {
      if (label.size() != k) {
        throw Error(ErrorCode::kShapeMismatch,
                    "output label '" + label +
                        "' is not a length-k bit vector; not an OUE channel?");
      }
      std::vector<std::uint8_t> bits(k);
      for (std::size_t v = 0; v < k; ++v) {
        if (label[v] != '0' && label[v] != '1') {
          throw Error(ErrorCode::kInvalidArgument,
                      "output label '" + label + "' holds a non-bit character");
        }
        bits[v] = label[v] == '1' ? 1 : 0;
      }
      batch.oue_reports.push_back(std::move(bits));
    }
  }
  save_batch(batch, a.out_path);

  json result;
  result["path"] = a.out_path;
  result["sidecar"] = a.out_path + ".json";
  result["mechanism"] = a.mechanism;
  result["epsilon"] = batch.epsilon;
  result["input"] = a.input;
  result["n"] = a.n;
  result["seed"] = a.seed;
  report.emit(std::move(result), out);
}

void dispatch_estimate(const std::string& reports_path,
                       const std::string& mechanism, Report& report,
                       std::ostream& out) {
  const ReportBatch batch = load_batch(reports_path);
  report.add_input(reports_path);
  report.add_input(reports_path + ".json");
  if (!mechanism.empty() &&
      mechanism_from_string(mechanism) != batch.mechanism) {
    throw Error(ErrorCode::kInvalidArgument,
                "--mechanism disagrees with the batch sidecar");
  }
  const Eigen::VectorXd estimates = estimate_frequencies(batch);

  json rows = json::array();
  for (Eigen::Index i = 0; i < estimates.size(); ++i) {
    json row;
    row["symbol"] = batch.alphabet.symbols[static_cast<std::size_t>(i)];
    row["estimate"] = estimates(i);
    rows.push_back(std::move(row));
  }
  json result;
  result["mechanism"] = to_string(batch.mechanism);
  result["epsilon"] = batch.epsilon;
  result["n"] = batch.size();
  result["estimates"] = std::move(rows);
  report.emit(std::move(result), out);
}

void dispatch_curve(const std::string& prior_path,
                    const std::string& distortion_path,
                    const std::string& grid_spec, const std::string& out_path,
                    Report& report, std::ostream& out) {
  const Prior p = load_prior(prior_path);
  report.add_input(prior_path);
  const DistortionMatrix d = load_distortion(distortion_path);
  report.add_input(distortion_path);
  const TradeoffCurve curve = tradeoff_curve(p, d, parse_grid(grid_spec));
  save_curve(curve, out_path);

  json points = json::array();
  for (const auto& pt : curve.points) {
    json row;
    row["epsilon"] = pt.epsilon;
    row["distortion"] = pt.distortion;
    row["iterations"] = pt.iterations;
    points.push_back(std::move(row));
  }
  json result;
  result["path"] = out_path;
  result["points"] = std::move(points);
  report.emit(std::move(result), out);
}

struct AnonArgs {
  std::string dataset_path;
  std::string quasi;
  std::string sensitive;
  std::size_t level = 0;
};

void dispatch_anon(bool k_check, const AnonArgs& a, Report& report,
                   std::ostream& out) {
  const Dataset ds =
      load_dataset(a.dataset_path, split_list(a.quasi), a.sensitive);
  report.add_input(a.dataset_path);
  json result;
  if (k_check) {
    const KAnonymityReport r = check_k_anonymity(ds, a.level);
    result["check"] = "k-anonymity";
    result["k"] = a.level;
    result["holds"] = r.holds;
    result["max_k"] = r.max_k;
    if (r.violating_class) {
      result["violating_class"] = anonymity_class_to_json(*r.violating_class);
    }
  } else {
    const LDiversityReport r = check_l_diversity(ds, a.level);
    result["check"] = "l-diversity";
    result["l"] = a.level;
    result["holds"] = r.holds;
    result["max_l"] = r.max_l;
    if (r.violating_class) {
      result["violating_class"] = anonymity_class_to_json(*r.violating_class);
    }
  }
  report.emit(std::move(result), out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{
      "localpriv: represent local privatization mechanisms as finite "
      "channels, audit them against local privacy notions, and synthesize "
      "classical mechanisms"};
  app.name("localpriv");
  Report report(args);

  AuditArgs audit_args;
  auto* audit =
      app.add_subcommand("audit",
                         "Compute the tightest budget a channel satisfies "
                         "under one notion: ldp (local differential privacy), "
                         "ldp-delta (its (eps,delta) hockey-stick relaxation), "
                         "lip / lip-delta (local information privacy), lmip "
                         "(local mutual information privacy), di "
                         "(differential identifiability), mil (maximal "
                         "information leakage), pufferfish (local pufferfish "
                         "privacy), geo (geo-indistinguishability)");
  audit
      ->add_option("notion", audit_args.notion,
                   "one of: ldp, ldp-delta, lip, lip-delta, lmip, di, mil, "
                   "pufferfish, geo")
      ->required()
      ->check(CLI::IsMember({"ldp", "ldp-delta", "lip", "lip-delta", "lmip",
                             "di", "mil", "pufferfish", "geo"}));
  audit->add_option("--channel", audit_args.channel_path, "channel JSON file")
      ->required();
  audit->add_option("--prior", audit_args.prior_path,
                    "prior JSON file (lip, lip-delta, lmip, di)");
  audit->add_option("--metric", audit_args.metric_path,
                    "metric JSON file (geo)");
  audit->add_option("--secrets", audit_args.secrets_path,
                    "secret-model JSON file (pufferfish)");
  audit->add_option("--eps", audit_args.eps,
                    "budget at which to evaluate delta (ldp-delta, lip-delta)");

  DesignArgs design_args;
  auto* design = app.add_subcommand(
      "design",
      "Construct a classical mechanism as an explicit channel: krr (k-ary "
      "randomized response), oue (optimized unary encoding), sampling "
      "(random sampling mechanism), geometric (noise-adding mechanism), "
      "geo-exp (geo-indistinguishability exponential mechanism), mip-optimal "
      "(convex-optimization mechanism for mutual information privacy), "
      "wasserstein (pufferfish Wasserstein mechanism)");
  design
      ->add_option("family", design_args.family,
                   "one of: krr, oue, sampling, geometric, geo-exp, "
                   "mip-optimal, wasserstein")
      ->required()
      ->check(CLI::IsMember({"krr", "oue", "sampling", "geometric", "geo-exp",
                             "mip-optimal", "wasserstein"}));
  design->add_option("--k", design_args.k, "alphabet size (krr, oue)");
  design->add_option("--labels", design_args.labels,
                     "comma-separated symbol labels (krr, oue)");
  design->add_option("--prior", design_args.prior_path,
                     "prior JSON file (sampling, mip-optimal)");
  design->add_option("--metric", design_args.metric_path,
                     "metric JSON file (geo-exp)");
  design->add_option("--secrets", design_args.secrets_path,
                     "secret-model JSON file (wasserstein)");
  design->add_option("--distortion", design_args.distortion_path,
                     "distortion JSON file (mip-optimal)");
  design->add_option("--grid-min", design_args.grid_min,
                     "integer grid lower end (geometric, wasserstein)");
  design->add_option("--grid-max", design_args.grid_max,
                     "integer grid upper end (geometric, wasserstein)");
  design->add_option("--p-truth", design_args.p_truth,
                     "truthful-release probability (sampling)");
  design->add_option("--eps", design_args.eps, "privacy budget");
  design->add_option("-o,--out", design_args.out_path, "output channel JSON")
      ->required();

  SampleArgs sample_args;
  auto* smp = app.add_subcommand(
      "sample", "Draw privatized reports from one channel row, "
                "reproducibly (mt19937_64 stream, one draw per report)");
  smp->add_option("--channel", sample_args.channel_path, "channel JSON file")
      ->required();
  smp->add_option("--input", sample_args.input, "true input symbol")
      ->required();
  smp->add_option("--n", sample_args.n, "number of reports")->required();
  smp->add_option("--seed", sample_args.seed, "generator seed")->required();
  smp->add_option("--mechanism", sample_args.mechanism,
                  "batch layout: krr (symbols) or oue (bit vectors)")
      ->check(CLI::IsMember({"krr", "oue"}));
  smp->add_option("--eps", sample_args.eps,
                  "budget stamped into the sidecar (defaults to the channel's "
                  "audited LDP budget)");
  smp->add_option("-o,--out", sample_args.out_path, "output reports CSV")
      ->required();

  std::string estimate_reports;
  std::string estimate_mechanism;
  auto* est = app.add_subcommand(
      "estimate", "Bias-corrected frequency estimates from a report batch "
                  "(randomized response / unary encoding aggregation)");
  est->add_option("--reports", estimate_reports, "reports CSV (sidecar beside)")
      ->required();
  est->add_option("--mechanism", estimate_mechanism,
                  "cross-check against the sidecar")
      ->check(CLI::IsMember({"krr", "oue"}));

  std::string curve_prior, curve_distortion, curve_grid, curve_out;
  auto* crv = app.add_subcommand(
      "curve", "Privacy-utility tradeoff: minimum expected distortion at each "
               "mutual-information budget on the grid");
  crv->add_option("--prior", curve_prior, "prior JSON file")->required();
  crv->add_option("--distortion", curve_distortion, "distortion JSON file")
      ->required();
  crv->add_option("--eps-grid", curve_grid,
                  "comma-separated strictly increasing budgets (nats)")
      ->required();
  crv->add_option("-o,--out", curve_out, "output CSV")->required();

  auto* anon = app.add_subcommand(
      "anon", "Dataset-level checks: local k-anonymity and local l-diversity");
  AnonArgs anon_args;
  auto* anon_k = anon->add_subcommand(
      "check-k", "every quasi-identifier equivalence class must have >= k rows "
                 "(local k-anonymity)");
  auto* anon_l = anon->add_subcommand(
      "check-l", "every equivalence class must carry >= l distinct sensitive "
                 "values (local l-diversity)");
  for (auto* sub : {anon_k, anon_l}) {
    sub->add_option("--dataset", anon_args.dataset_path, "CSV with header row")
        ->required();
    sub->add_option("--quasi", anon_args.quasi,
                    "comma-separated quasi-identifier columns")
        ->required();
    sub->add_option("--sensitive", anon_args.sensitive, "sensitive column")
        ->required();
  }
  anon_k->add_option("--k", anon_args.level, "required class size")->required();
  anon_l->add_option("--l", anon_args.level, "required distinct count")
      ->required();
  anon->require_subcommand(1);

  app.require_subcommand(1);

  std::vector<const char*> argv;
  argv.push_back("localpriv");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    audit_args.eps_set = audit->count("--eps") > 0;
    design_args.eps_set = design->count("--eps") > 0;
    design_args.p_truth_set = design->count("--p-truth") > 0;
    design_args.grid_set =
        design->count("--grid-min") > 0 && design->count("--grid-max") > 0;
    sample_args.eps_set = smp->count("--eps") > 0;

    if (audit->parsed()) {
      report.emit(audit_report_to_json(dispatch_audit(audit_args, report)),
                  out);
    } else if (design->parsed()) {
      dispatch_design(design_args, report, out);
    } else if (smp->parsed()) {
      dispatch_sample(sample_args, report, out);
    } else if (est->parsed()) {
      dispatch_estimate(estimate_reports, estimate_mechanism, report, out);
    } else if (crv->parsed()) {
      dispatch_curve(curve_prior, curve_distortion, curve_grid, curve_out,
                     report, out);
    } else if (anon->parsed()) {
      dispatch_anon(anon_k->parsed(), anon_args, report, out);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::kNoConvergence ? 3 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace localpriv::cli
