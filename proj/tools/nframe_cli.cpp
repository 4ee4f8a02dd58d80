// nframe: command-line front end for frames relative to an anchor tuple.
//
// Exit codes: 0 success (the family is a frame, every check passed),
// 1 negative verdict (not a frame, failed verification or certification),
// 2 invalid input.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nframe/certify.hpp"
#include "nframe/frames.hpp"
#include "nframe/instance.hpp"
#include "nframe/nspace.hpp"
#include "nframe/optheory.hpp"
#include "nframe/testkit.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace nframe;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitInvalid = 2;

struct CommonFlags {
  std::string instance;
  double tol = kFrameTolerance;
  double rank_tol = kRankTolerance;
  double tight_tol = kTightTolerance;
  double bessel_tol = kBesselTolerance;
  bool table = false;
};

json to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const Matrix& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Vector(m.row(r).transpose())));
  return out;
}

json to_json(const std::vector<AmbientVector>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(to_json(v));
  return out;
}

json to_json(const FrameBounds& b) { return {{"lower", b.lower}, {"upper", b.upper}, {"optimal", b.optimal}}; }

class Report {
 public:
  Report(std::string command, const CommonFlags& flags) : flags_(flags), start_(std::chrono::steady_clock::now()) {
    doc_["command"] = std::move(command);
    if (!flags.instance.empty()) doc_["instance"] = flags.instance;
    doc_["results"] = json::object();
    doc_["tolerances"] = {{"frame", flags.tol},
                          {"rank", flags.rank_tol},
                          {"tight", flags.tight_tol},
                          {"bessel", flags.bessel_tol}};
    doc_["verdicts"] = json::object();
  }

  json& results() { return doc_["results"]; }
  json& verdicts() { return doc_["verdicts"]; }
  json& tolerances() { return doc_["tolerances"]; }

  int emit(int code) {
    doc_["exit_code"] = code;
    doc_["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (flags_.table) {
      print_table(doc_, "");
    } else {
      std::cout << doc_.dump(2) << '\n';
    }
    return code;
  }

 private:
  static void print_table(const json& j, const std::string& prefix) {
    if (j.is_object()) {
      for (const auto& [key, value] : j.items()) print_table(value, prefix.empty() ? key : prefix + "." + key);
      return;
    }
    std::string text;
    if (j.is_array()) {
      bool scalar = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      if (!scalar) {
        for (std::size_t i = 0; i < j.size(); ++i) print_table(j[i], prefix + "[" + std::to_string(i) + "]");
        return;
      }
      text = j.dump();
    } else if (j.is_string()) {
      text = j.get<std::string>();
    } else {
      text = j.dump();
    }
    std::cout << std::left << std::setw(40) << prefix << ' ' << text << '\n';
  }

  const CommonFlags& flags_;
  std::chrono::steady_clock::time_point start_;
  json doc_;
};

ResolvedInstance load(const CommonFlags& flags) {
  if (flags.instance.empty()) throw InputError("--instance is required");
  return resolve_instance(load_instance(flags.instance), flags.rank_tol);
}

void describe_space(Report& r, const ResolvedInstance& inst) {
  r.results()["dimension"] = inst.space->dimension();
  r.results()["order"] = inst.space->anchor_set().order();
  r.results()["rank"] = inst.space->rank();
  r.results()["gamma"] = inst.space->gamma();
  r.results()["frame_size"] = inst.frame.size();
}

int cmd_check(const CommonFlags& flags, std::optional<double> bessel_bound) {
  Report r("check", flags);
  const ResolvedInstance inst = load(flags);
  describe_space(r, inst);
  const FrameBounds b = optimal_bounds(inst.frame);
  r.results()["bounds"] = to_json(b);
  const bool frame = is_frame(inst.frame, flags.tol);
  const double bound = bessel_bound.value_or(b.upper);
  const bool bessel = bound > 0.0 ? is_bessel(inst.frame, bound, flags.bessel_tol) : b.upper <= 0.0;
  const TightCheck tight = is_tight(inst.frame, flags.tight_tol);
  r.results()["bessel_bound"] = bound;
  r.verdicts()["frame"] = frame;
  r.verdicts()["bessel"] = bessel;
  r.verdicts()["tight"] = frame && tight.tight;
  if (frame && tight.tight) r.results()["tight_bound"] = tight.bound;
  return r.emit(frame ? kExitOk : kExitNegative);
}

int cmd_inner(const CommonFlags& flags, const std::string& xname, const std::string& yname) {
  Report r("inner", flags);
  const ResolvedInstance inst = load(flags);
  const AmbientVector& x = inst.require_vector(xname);
  const AmbientVector& y = inst.require_vector(yname);
  const double det = n_inner(x, y, inst.space->anchor_set());
  const double induced = induced_inner(project(x, *inst.space), project(y, *inst.space), *inst.space);
  r.results()["x"] = xname;
  r.results()["y"] = yname;
  r.results()["gamma"] = inst.space->gamma();
  r.results()["n_inner"] = det;
  r.results()["induced_inner"] = induced;
  r.results()["agreement_residual"] = std::abs(det - induced);
  return r.emit(kExitOk);
}

int cmd_norm(const CommonFlags& flags, const std::string& xname) {
  Report r("norm", flags);
  const ResolvedInstance inst = load(flags);
  const AmbientVector& x = inst.require_vector(xname);
  r.results()["x"] = xname;
  r.results()["n_norm"] = n_norm(x, inst.space->anchor_set());
  r.results()["projection"] = to_json(project(x, *inst.space));
  return r.emit(kExitOk);
}

int cmd_bounds(const CommonFlags& flags, int samples, std::uint64_t seed) {
  Report r("bounds", flags);
  const ResolvedInstance inst = load(flags);
  describe_space(r, inst);
  const FrameOperator s = frame_operator(inst.frame);
  r.results()["bounds"] = to_json(optimal_bounds(s));
  r.results()["frame_operator"] = to_json(s.matrix);
  r.results()["eigenvalues"] = to_json(s.spectrum.values);
  if (samples > 0) {
    const testkit::OracleBounds ob = testkit::oracle_bounds(inst.frame, samples, seed);
    r.results()["sampled"] = {{"samples", samples}, {"seed", seed}, {"min", ob.min}, {"max", ob.max}};
  }
  r.verdicts()["frame"] = is_frame(inst.frame, flags.tol);
  return r.emit(kExitOk);
}

// max over supplied vectors of both reconstruction residuals, or null without vectors.
json reconstruction_residual(const ResolvedInstance& inst, double tol) {
  if (inst.file.vectors.empty()) return nullptr;
  double worst = 0.0;
  for (const auto& [name, f] : inst.file.vectors) {
    const InducedVector target = project(f, *inst.space);
    worst = std::max(worst, (reconstruct(f, inst.frame, tol) - target).norm());
    worst = std::max(worst, (reconstruct_from_dual(f, inst.frame, tol) - target).norm());
  }
  return worst;
}

int cmd_dual(const CommonFlags& flags) {
  Report r("dual", flags);
  const ResolvedInstance inst = load(flags);
  describe_space(r, inst);
  r.results()["bounds"] = to_json(optimal_bounds(inst.frame));
  if (!is_frame(inst.frame, flags.tol)) {
    r.verdicts()["frame"] = false;
    return r.emit(kExitNegative);
  }
  const FrameSystem dual = canonical_dual(inst.frame, flags.tol);
  r.verdicts()["frame"] = true;
  r.results()["dual_vectors"] = to_json(dual.vectors());
  r.results()["dual_bounds"] = to_json(optimal_bounds(dual));
  r.results()["max_reconstruction_residual"] = reconstruction_residual(inst, flags.tol);
  return r.emit(kExitOk);
}

int cmd_tight(const CommonFlags& flags) {
  constexpr double kDeviationLimit = 1e-8;
  Report r("tight", flags);
  r.tolerances()["deviation"] = kDeviationLimit;
  const ResolvedInstance inst = load(flags);
  describe_space(r, inst);
  r.results()["bounds"] = to_json(optimal_bounds(inst.frame));
  if (!is_frame(inst.frame, flags.tol)) {
    r.verdicts()["frame"] = false;
    return r.emit(kExitNegative);
  }
  const FrameSystem tight = canonical_tight(inst.frame, flags.tol);
  const FrameBounds tb = optimal_bounds(tight);
  const double deviation = std::max(std::abs(tb.lower - 1.0), std::abs(tb.upper - 1.0));
  r.verdicts()["frame"] = true;
  r.results()["tight_vectors"] = to_json(tight.vectors());
  r.results()["tight_bounds"] = to_json(tb);
  r.results()["deviation"] = deviation;
  r.verdicts()["normalized_tight"] = deviation <= kDeviationLimit;
  return r.emit(deviation <= kDeviationLimit ? kExitOk : kExitNegative);
}

int cmd_reconstruct(const CommonFlags& flags) {
  Report r("reconstruct", flags);
  const ResolvedInstance inst = load(flags);
  describe_space(r, inst);
  if (!is_frame(inst.frame, flags.tol)) {
    r.verdicts()["frame"] = false;
    return r.emit(kExitNegative);
  }
  r.verdicts()["frame"] = true;
  json items = json::object();
  for (const auto& [name, f] : inst.file.vectors) {
    const InducedVector target = project(f, *inst.space);
    const InducedVector primal = reconstruct(f, inst.frame, flags.tol);
    const InducedVector swapped = reconstruct_from_dual(f, inst.frame, flags.tol);
    items[name] = {{"projection", to_json(target)},
                   {"dual_coefficients", to_json(primal)},
                   {"frame_coefficients", to_json(swapped)},
                   {"residual", std::max((primal - target).norm(), (swapped - target).norm())}};
  }
  r.results()["vectors"] = std::move(items);
  return r.emit(kExitOk);
}

int cmd_image(const CommonFlags& flags, const std::string& op, bool perturb) {
  Report r("image", flags);
  const ResolvedInstance inst = load(flags);
  describe_space(r, inst);
  const Matrix& u = inst.require_operator(op);
  const Index k = inst.space->rank();
  const Matrix applied = perturb ? Matrix(Matrix::Identity(k, k) + u) : u;
  const FrameSystem image = image_frame(applied, inst.frame);
  const FrameOperator predicted = image_frame_operator(applied, inst.frame);
  r.results()["operator"] = op;
  r.results()["perturb_identity"] = perturb;
  r.results()["image_vectors"] = to_json(image.vectors());
  r.results()["image_bounds"] = to_json(optimal_bounds(image));
  r.results()["conjugation_residual"] = max_abs(frame_operator(image).matrix - predicted.matrix);
  const bool frame = is_frame(image, flags.tol);
  r.verdicts()["source_frame"] = is_frame(inst.frame, flags.tol);
  r.verdicts()["operator_invertible"] = is_invertible(applied, flags.tol);
  r.verdicts()["frame"] = frame;
  return r.emit(frame ? kExitOk : kExitNegative);
}

int cmd_combine(const CommonFlags& flags, const std::string& l1name, const std::string& l2name) {
  Report r("combine", flags);
  const ResolvedInstance inst = load(flags);
  describe_space(r, inst);
  const FrameSystem& second = inst.require_second_frame();
  const Matrix& l1 = inst.require_operator(l1name);
  const Matrix& l2 = inst.require_operator(l2name);
  const FrameSystem combined = combine(l1, inst.frame, l2, second);
  const Vector sigma = singular_values(combined_analysis_operator(l1, inst.frame, l2, second));
  r.results()["l1"] = l1name;
  r.results()["l2"] = l2name;
  r.results()["combined_vectors"] = to_json(combined.vectors());
  r.results()["combined_bounds"] = to_json(optimal_bounds(combined));
  r.results()["analysis_singular_values"] = to_json(sigma);
  const bool criterion = combination_is_frame(l1, inst.frame, l2, second, flags.tol);
  const bool frame = is_frame(combined, flags.tol);
  r.verdicts()["bounded_below"] = criterion;
  r.verdicts()["frame"] = frame;
  return r.emit(frame ? kExitOk : kExitNegative);
}

int cmd_certify(const CommonFlags& flags, const certify::Options& opts) {
  Report r("certify", flags);
  if (opts.trials < 1) throw PreconditionError("--trials must be at least 1");
  const certify::Report report = certify::run(opts);
  r.results()["seed"] = opts.seed;
  r.results()["trials"] = opts.trials;
  r.results()["max_dim"] = opts.max_dim;
  json suites = json::array();
  for (const auto& s : report.suites) {
    json entry = {{"name", s.name},           {"statement", s.statement}, {"tolerance", s.tolerance},
                  {"trials", s.trials},       {"passed", s.passed},       {"skipped", s.skipped},
                  {"worst_residual", s.worst_residual}, {"pass", s.ok()}};
    if (s.failing_trial) {
      entry["failing_trial"] = *s.failing_trial;
      entry["message"] = s.failure_message;
      if (s.counterexample) {
        entry["counterexample"] = json::parse(*s.counterexample);
        std::cerr << "counterexample for " << s.name << " (trial " << *s.failing_trial << "):\n"
                  << *s.counterexample;
      }
    }
    r.verdicts()[s.name] = s.ok();
    suites.push_back(std::move(entry));
  }
  r.results()["suites"] = std::move(suites);
  r.verdicts()["all_pass"] = report.all_pass();
  return r.emit(report.all_pass() ? kExitOk : kExitNegative);
}

void add_common(CLI::App* cmd, CommonFlags& flags, bool needs_instance = true) {
  if (needs_instance) cmd->add_option("--instance", flags.instance, "Instance file (JSON)")->required();
  cmd->add_option("--tol", flags.tol, "Frame / invertibility threshold")->capture_default_str();
  cmd->add_option("--rank-tol", flags.rank_tol, "Anchor Gram-determinant rank tolerance")->capture_default_str();
  cmd->add_option("--tight-tol", flags.tight_tol, "Tightness tolerance (B - A)/max(1, B)")->capture_default_str();
  cmd->add_option("--bessel-tol", flags.bessel_tol, "Bessel-bound slack")->capture_default_str();
  auto* json_flag = cmd->add_flag("--json", "JSON report (default)");
  cmd->add_flag("--table", flags.table, "Plain key/value report")->excludes(json_flag);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frames relative to an anchor tuple in n-inner product spaces"};
  app.require_subcommand(1);
  CommonFlags flags;

  auto* check = app.add_subcommand("check", "Frame, Bessel and tightness verdicts with optimal bounds");
  add_common(check, flags);
  std::optional<double> bessel_bound;
  check->add_option("--bessel-bound", bessel_bound, "Bound to test the Bessel property against");

  std::string xname = "x", yname = "y";
  auto* inner = app.add_subcommand("inner", "n-inner product of two named vectors");
  add_common(inner, flags);
  inner->add_option("--x", xname, "First vector name")->capture_default_str();
  inner->add_option("--y", yname, "Second vector name")->capture_default_str();

  auto* norm = app.add_subcommand("norm", "n-norm of a named vector");
  add_common(norm, flags);
  norm->add_option("--x", xname, "Vector name")->capture_default_str();

  int samples = 0;
  std::uint64_t seed = 42;
  auto* bounds = app.add_subcommand("bounds", "Frame operator spectrum and optimal bounds");
  add_common(bounds, flags);
  bounds->add_option("--samples", samples, "Also sample the frame ratio this many times")->capture_default_str();
  bounds->add_option("--seed", seed, "Sampling seed")->capture_default_str();

  auto* dual = app.add_subcommand("dual", "Canonical dual frame");
  add_common(dual, flags);
  auto* tight = app.add_subcommand("tight", "Canonical normalized tight frame {S^-1/2 f_i}");
  add_common(tight, flags);
  auto* recon = app.add_subcommand("reconstruct", "Reconstruct every named vector from its frame coefficients");
  add_common(recon, flags);

  std::string opname = "U";
  bool perturb = false;
  auto* image = app.add_subcommand("image", "Image of the frame under a named operator");
  add_common(image, flags);
  image->add_option("--operator", opname, "Operator name")->capture_default_str();
  image->add_flag("--perturb", perturb, "Use I + U instead of U");

  std::string l1name = "L1", l2name = "L2";
  auto* comb = app.add_subcommand("combine", "Combined family {L1 f_i + L2 g_i} with the second frame");
  add_common(comb, flags);
  comb->add_option("--l1", l1name, "Operator applied to the first frame")->capture_default_str();
  comb->add_option("--l2", l2name, "Operator applied to the second frame")->capture_default_str();

  certify::Options copts;
  auto* cert = app.add_subcommand("certify", "Randomized certification of every property suite");
  add_common(cert, flags, false);
  cert->add_option("--seed", copts.seed, "Master seed")->capture_default_str();
  cert->add_option("--trials", copts.trials, "Number of random instances")->capture_default_str();
  cert->add_option("--max-dim", copts.max_dim, "Largest ambient dimension")->capture_default_str();
  cert->add_option("--threads", copts.threads, "Worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*check) return cmd_check(flags, bessel_bound);
    if (*inner) return cmd_inner(flags, xname, yname);
    if (*norm) return cmd_norm(flags, xname);
    if (*bounds) return cmd_bounds(flags, samples, seed);
    if (*dual) return cmd_dual(flags);
    if (*tight) return cmd_tight(flags);
    if (*recon) return cmd_reconstruct(flags);
    if (*image) return cmd_image(flags, opname, perturb);
    if (*comb) return cmd_combine(flags, l1name, l2name);
    if (*cert) return cmd_certify(flags, copts);
  } catch (const SingularFrameOperatorError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNegative;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNegative;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
