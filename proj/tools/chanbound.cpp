#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chanbound/bounds.hpp"
#include "chanbound/channels.hpp"
#include "chanbound/errors.hpp"
#include "chanbound/io.hpp"
#include "chanbound/majorization.hpp"
#include "chanbound/oracle.hpp"

namespace cb = chanbound;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitInvalidState = 3;
constexpr int kExitNotClosedForm = 4;
constexpr int kExitNotTracePreserving = 5;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void print(const cb::Json& j) { std::cout << j.dump(2) << "\n"; }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = s == "inf" ? HUGE_VAL : std::stod(s, &used);
    if (s != "inf" && used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("bad number '" + s + "' in " + what);
  }
}

cb::ScalarFunction parse_scalar(const std::string& s) {
  if (s == "id") return cb::ScalarFunction::identity();
  if (s == "sqrt") return cb::ScalarFunction::sqrt();
  if (s == "log") return cb::ScalarFunction::log();
  if (s.rfind("pow", 0) == 0) return cb::ScalarFunction::power(parse_double(s.substr(3), "power map"));
  throw UsageError("unknown scalar map '" + s + "' (expected id, sqrt, log or pow<p>)");
}

cb::Objective parse_objective(const std::string& s) {
  if (s == "trace") return cb::SchurConvexObjective::trace_distance();
  if (s == "hs") return cb::SchurConvexObjective::hs_distance();
  if (s == "fidelity") return cb::Objective::fidelity();
  if (s == "bures") return cb::Objective::bures();
  if (s == "relent") return cb::Objective::relative_entropy();
  const auto parts = split(s, ':');
  if (parts[0] == "schatten" && parts.size() == 2) {
    return cb::SchurConvexObjective::schatten(parse_double(parts[1], "schatten:<p>"));
  }
  if (parts[0] == "kyfan" && parts.size() == 2) {
    const double k = parse_double(parts[1], "kyfan:<k>");
    if (k < 1 || k != std::floor(k)) throw UsageError("kyfan order must be a positive integer");
    return cb::SchurConvexObjective::ky_fan(static_cast<std::size_t>(k));
  }
  if (parts[0] == "tf" && (parts.size() == 3 || (parts.size() == 4 && parts[3] == "abs"))) {
    return cb::TraceFunctional{parse_scalar(parts[1]), parse_scalar(parts[2]), parts.size() == 4};
  }
  throw UsageError("unknown objective '" + s +
                   "' (expected trace, hs, schatten:<p>, kyfan:<k>, fidelity, bures, relent or "
                   "tf:<f>:<g>[:abs])");
}

cb::ExtendedReal rescale(const cb::ExtendedReal& x, double factor) {
  return x.is_finite() ? cb::ExtendedReal(x.value() * factor) : x;
}

// ---------------------------------------------------------------------------
// bounds

struct BoundsArgs {
  std::string rho1, rho2, objective, cls;
  std::string emit_channel;
  std::string emit_which = "lower";
  std::size_t verify = 0;
  std::uint64_t seed = 0;
  std::string log_base = "e";
};

int cmd_bounds(const BoundsArgs& a) {
  const cb::Objective obj = parse_objective(a.objective);
  const cb::ChannelClass cls = cb::parse_channel_class(a.cls);
  const cb::DensityMatrix rho1 = cb::load_state(a.rho1);
  const cb::DensityMatrix rho2 = cb::load_state(a.rho2);
  if (rho1.dim() != rho2.dim()) throw cb::ParseError("rho1 and rho2 have different dimensions");

  cb::ReportFile out;
  out.report = cb::compute_bounds(rho1, rho2, obj, cls);

  if (!a.emit_channel.empty()) {
    const auto& att = a.emit_which == "upper" ? out.report.upper_attainer : out.report.lower_attainer;
    if (!att) throw UsageError("no attainer for the requested bound");
    const auto phi = cb::attaining_channel(rho1, rho2, *att, cls);
    std::ofstream f(a.emit_channel);
    if (!f) throw UsageError("cannot write " + a.emit_channel);
    f << cb::channel_to_json(phi).dump(2) << "\n";
    out.channel_file = a.emit_channel;
  }

  int code = kExitOk;
  if (a.verify > 0) {
    cb::SeededSampler s(a.seed);
    const auto br = cb::bracket_bounds(rho1, rho2, obj, out.report, a.verify, s);
    out.sampling = cb::SamplingSummary{a.seed, br.trials, br.violations, br.observed_min, br.observed_max};
    if (br.violations > 0) code = kExitViolations;
  }

  if (std::holds_alternative<cb::RelativeEntropyObjective>(obj.variant())) {
    out.log_base = a.log_base;
    if (a.log_base == "2") {
      const double k = 1.0 / std::log(2.0);
      out.report.lower = rescale(out.report.lower, k);
      out.report.upper = rescale(out.report.upper, k);
      if (out.sampling) {
        out.sampling->observed_min = rescale(out.sampling->observed_min, k);
        out.sampling->observed_max = rescale(out.sampling->observed_max, k);
      }
    }
  }
  print(cb::report_to_json(out));
  return code;
}

// ---------------------------------------------------------------------------
// verify-channel

int cmd_verify_channel(const std::string& channel_path, const std::string& rho_path) {
  const cb::KrausChannel phi = cb::load_channel(channel_path);
  const cb::ChannelClassification c = cb::classify(phi);
  cb::Json j;
  j["dim"] = phi.dim();
  j["kraus_count"] = phi.ops().size();
  j["trace_preserving"] = c.trace_preserving;
  j["unital"] = c.unital;
  j["mixed_unitary_form"] = c.mixed_unitary_form;
  if (!rho_path.empty() && c.trace_preserving) {
    const cb::DensityMatrix rho = cb::load_state(rho_path);
    if (rho.dim() != phi.dim()) throw cb::ParseError("state and channel dimensions differ");
    const cb::DensityMatrix out = cb::apply(phi, rho);
    j["input_spectrum"] = rho.eigenvalues().vector();
    j["output_spectrum"] = out.eigenvalues().vector();
    j["output_majorized_by_input"] = cb::is_majorized(out.eigenvalues(), rho.eigenvalues());
  }
  print(j);
  return c.trace_preserving ? kExitOk : kExitNotTracePreserving;
}

// ---------------------------------------------------------------------------
// example

cb::Json rational_list(const std::vector<cb::Rational>& v) {
  cb::Json j = cb::Json::array();
  for (const auto& r : v) j.push_back(cb::to_string(r));
  return j;
}

cb::Json bound_pair(const cb::BoundReport& r) {
  return {{"lower", cb::extended_to_json(r.lower)}, {"upper", cb::extended_to_json(r.upper)}};
}

const std::vector<cb::Rational> kExampleA = {{2, 5}, {3, 10}, {3, 10}, {0, 1}};
const std::vector<cb::Rational> kExampleB = {{1, 2}, {1, 5}, {1, 5}, {1, 10}};

int cmd_example(const std::string& name) {
  const auto a = cb::to_double(kExampleA);
  const auto b = cb::to_double(kExampleB);
  const auto rho1 = cb::DensityMatrix::diagonal(a);
  const auto rho2 = cb::DensityMatrix::diagonal(b);

  cb::Json j;
  j["example"] = name;
  j["inputs"] = {{"lambda_rho1", rational_list(kExampleA)}, {"lambda_rho2", rational_list(kExampleB)}};

  if (name == "thm24") {
    const auto t = cb::minimize_schur_convex_target<cb::Rational>(kExampleA, kExampleB);
    cb::Json steps = cb::Json::array();
    steps.push_back({{"step", "initial"}, {"delta", rational_list(t.initial_delta)}});
    for (const auto& s : t.steps) {
      steps.push_back({{"step", "pool"},
                       {"first", s.first + 1},
                       {"last", s.last + 1},
                       {"delta", rational_list(s.delta)}});
    }
    j["trace"] = std::move(steps);
    j["d"] = rational_list(t.d);
    j["d_float"] = cb::to_double(t.d);
    j["bounds"] = {
        {"hs_unital", bound_pair(cb::schur_convex_bounds(rho1, rho2, cb::SchurConvexObjective::hs_distance(),
                                                         cb::ChannelClass::kUnital))},
        {"trace_unital", bound_pair(cb::schur_convex_bounds(
                             rho1, rho2, cb::SchurConvexObjective::trace_distance(), cb::ChannelClass::kUnital))}};
  } else if (name == "thm33") {
    const auto t = cb::maximize_trace_functional_target<cb::Rational>(kExampleA, kExampleB);
    cb::Json steps = cb::Json::array();
    const std::size_t r = t.structure.support;
    if (r < kExampleA.size()) {
      steps.push_back({{"step", "strip zero tail"},
                       {"indices", {r + 1, kExampleA.size()}},
                       {"d_tail", rational_list({t.d.begin() + static_cast<long>(r), t.d.end()})}});
    }
    for (const auto& blk : t.structure.blocks) {
      steps.push_back({{"step", "block"},
                       {"indices", {blk.begin + 1, blk.end}},
                       {"ratio", cb::to_string(blk.ratio)},
                       {"d_block", rational_list({t.d.begin() + static_cast<long>(blk.begin),
                                                  t.d.begin() + static_cast<long>(blk.end)})}});
    }
    j["trace"] = std::move(steps);
    j["d"] = rational_list(t.d);
    j["d_float"] = cb::to_double(t.d);
    j["bounds"] = {
        {"fidelity_unital", bound_pair(cb::fidelity_bounds(rho1, rho2, cb::ChannelClass::kUnital))},
        {"relent_unital", bound_pair(cb::relative_entropy_bounds(rho1, rho2, cb::ChannelClass::kUnital))},
        {"bures_unital", bound_pair(cb::bures_bounds(rho1, rho2, cb::ChannelClass::kUnital))}};
  } else {
    throw UsageError("unknown example '" + name + "' (expected thm24 or thm33)");
  }
  print(j);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal bounds of distance functions between a state and the channel images of another"};
  app.require_subcommand(1);

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "Closed-form lower and upper bounds");
  bounds->add_option("--rho1", ba.rho1, "Reference state file")->required();
  bounds->add_option("--rho2", ba.rho2, "State fed through the channel")->required();
  bounds->add_option("--objective", ba.objective,
                     "trace|hs|schatten:<p>|kyfan:<k>|fidelity|bures|relent|tf:<f>:<g>[:abs]")
      ->required();
  bounds->add_option("--class", ba.cls, "unitary|mixed-unitary|unital|all")->required();
  bounds->add_option("--emit-channel", ba.emit_channel, "Write an attaining channel here");
  bounds->add_option("--emit-which", ba.emit_which, "Attainer to emit")
      ->check(CLI::IsMember({"lower", "upper"}));
  bounds->add_option("--verify", ba.verify, "Sampled channels for bracketing");
  bounds->add_option("--seed", ba.seed, "Sampler seed");
  bounds->add_option("--log-base", ba.log_base, "Logarithm base for relent")
      ->check(CLI::IsMember({"e", "2"}));

  std::string channel_path, rho_path;
  auto* verify = app.add_subcommand("verify-channel", "Classify a channel file");
  verify->add_option("--channel", channel_path, "Channel file")->required();
  verify->add_option("--rho", rho_path, "Optional state to push through the channel");

  std::string example_name;
  auto* example = app.add_subcommand("example", "Reproduce a worked example");
  example->add_option("name", example_name, "thm24 or thm33")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadInput;
  }

  try {
    if (*bounds) return cmd_bounds(ba);
    if (*verify) return cmd_verify_channel(channel_path, rho_path);
    return cmd_example(example_name);
  } catch (const cb::NotClosedFormError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotClosedForm;
  } catch (const cb::InvalidStateError& e) {
    std::cerr << "error: invalid state: " << e.what() << "\n";
    return kExitInvalidState;
  } catch (const cb::SymmetryError& e) {
    std::cerr << "error: invalid state: " << e.what() << "\n";
    return kExitInvalidState;
  } catch (const cb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
}
