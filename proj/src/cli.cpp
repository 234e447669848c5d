#include "grasslin/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>

#include "grasslin/bound_suites.hpp"
#include "grasslin/case_studies.hpp"
#include "grasslin/matrix_io.hpp"
#include "grasslin/report.hpp"

namespace grasslin {

namespace {

double guard_from_env() {
  if (const char* raw = std::getenv("GRASSLIN_GUARD")) {
    char* end = nullptr;
    double value = std::strtod(raw, &end);
    if (end != raw && *end == '\0' && value > 0.0) return value;
    throw Error(ErrorCode::InvalidArgument,
                std::string("GRASSLIN_GUARD is not a positive number: ") + raw);
  }
  return kDefaultGuard;
}

void emit(std::ostream& out, const Json& doc, const std::string& format) {
  if (format == "json") {
    out << doc.dump(2) << "\n";
    return;
  }
  // Text mode: flat "key value" lines in document order.
  for (const auto& [key, value] : doc.items()) {
    if (value.is_object() || value.is_array()) {
      out << key << " " << value.dump() << "\n";
    } else if (value.is_string()) {
      out << key << " " << value.get<std::string>() << "\n";
    } else {
      out << key << " " << value.dump() << "\n";
    }
  }
}

Json bound_value_json(const BoundValue& bound) {
  Json doc;
  doc["applicable"] = bound.applicable();
  if (bound.applicable()) doc["value"] = *bound.value;
  doc["first_order"] = bound.first_order;
  Json hyps = Json::array();
  for (const auto& check : bound.hypothesis_report)
    hyps.push_back({{"condition", check.condition},
                    {"satisfied", check.satisfied}});
  doc["hypotheses"] = hyps;
  return doc;
}

struct CommonOptions {
  std::string matrix, rhs, matrix2, rhs2, matrix3, rhs3, x1, x2;
  double theta = 0.0;
  std::optional<double> mu;
  std::optional<double> alpha;
  std::optional<double> data_error;
  std::optional<std::size_t> rank;
  double xnorm = 0.0;
  std::string format = "text";
  std::uint64_t seed = 1;
  std::size_t trials = 500;
  std::string suite;
  double t_param = 0.6666;
  std::size_t size = 128;
  std::string dump_dir;
};

CaseStudy build_demo_case(const std::string& name, const CommonOptions& opt) {
  if (name == "sylvester") return sylvester_case(opt.t_param);
  if (name == "bezout") return bezout_case();
  if (name == "division") return division_case();
  if (name == "macaulay") return macaulay_fixture();
  if (name == "regulator") return regulator_case();
  if (name == "volterra") return volterra_case(4.0, opt.size);
  throw Error(ErrorCode::InvalidArgument, "unknown demo '" + name + "'");
}

Json demo_division_extras(const CaseStudy& cs, const GeneralSolution& solution,
                          double guard) {
  const DenseVector& exact = cs.vectors.at("exact_solution");
  const Subspace& kernel = solution.affine->kernel;
  DenseVector direction = kernel.basis().column(0);

  DenseVector x1 = cs.vectors.at("single_dense_solution");
  DenseVector x2 = tikhonov_solve(cs.A, cs.b, 1e-3);
  DenseVector x3 = truncated_svd_solution(cs.A, cs.b, cs.theta, guard);

  Json extras;
  auto describe = [&](const char* key, const DenseVector& x) {
    AffineSolution set = canonicalize_affine(x, kernel);
    auto [point, coeffs] = nearest_in_affine(set, exact);
    (void)coeffs;
    Json entry;
    entry["vector"] = json_from_vector(x);
    entry["vector_relative_error"] = (x - exact).norm() / exact.norm();
    entry["nearest_coefficient"] = inner(direction, point - x).real();
    entry["nearest_relative_error"] = (point - exact).norm() / exact.norm();
    extras[key] = entry;
  };
  describe("dense_solve", x1);
  describe("tikhonov", x2);
  describe("truncated_svd", x3);
  return extras;
}

Json demo_volterra_extras(const CaseStudy& cs, const GeneralSolution& solution) {
  Json extras;
  if (solution.is_empty()) return extras;
  const Subspace& kernel = solution.affine->kernel;
  const DenseVector& z = solution.affine->anchor;

  // Recover the constant-one particular solution through the kernel.
  DenseVector ones = DenseVector::from_real(
      std::vector<double>(cs.A.cols(), 1.0));
  DenseVector correction = kernel.project(ones - z);
  DenseVector recovered = z + correction;
  double h = 1.0 / static_cast<double>(cs.A.rows());
  extras["constant_one_weighted_l1_error"] = (recovered - ones).norm1() * h;
  extras["kernel_dimension"] = kernel.dim();
  extras["quadrature_underflow"] = cs.quadrature_underflow;
  return extras;
}

int demo_command(const std::string& name, const CommonOptions& opt,
                 std::ostream& out) {
  double guard = guard_from_env();
  CaseStudy cs = build_demo_case(name, opt);

  if (!opt.dump_dir.empty()) {
    std::filesystem::create_directories(opt.dump_dir);
    write_matrix_file(opt.dump_dir + "/" + cs.name + "_A.mtx", cs.A);
    write_vector_file(opt.dump_dir + "/" + cs.name + "_b.vec", cs.b);
  }

  SolverConfig cfg;
  cfg.theta = cs.theta;
  cfg.guard = guard;
  GeneralSolution solution = solve_general(cs.A, cs.b, cfg);

  Json inputs;
  inputs["demo"] = cs.name;
  inputs["theta"] = cs.theta;
  Json doc = solve_document(inputs, solution, classic_condition(cs.A));

  if (name == "division" && !solution.is_empty())
    doc["particular_solutions"] = demo_division_extras(cs, solution, guard);
  if (name == "volterra")
    doc["volterra"] = demo_volterra_extras(cs, solution);
  if (name == "macaulay" && !solution.is_empty()) {
    Subspace reference =
        Subspace::orthonormalize(cs.matrices.at("reference_kernel"));
    doc["kernel_distance_to_reference"] =
        grassmann_distance(solution.affine->kernel, reference);
  }

  emit(out, doc, opt.format);
  return 0;
}

int bound_command(const std::string& name, const CommonOptions& opt,
                  std::ostream& out) {
  double guard = guard_from_env();
  Json doc;

  if (name == "window") {
    if (opt.matrix.empty() || !opt.data_error)
      throw Error(ErrorCode::InvalidArgument,
                  "bound window needs --matrix and --data-error");
    DenseMatrix A = parse_matrix_file(opt.matrix);
    std::optional<DenseVector> b;
    if (!opt.rhs.empty()) b = parse_vector_file(opt.rhs);
    ToleranceWindow window = tolerance_window(A, *opt.data_error, b);
    doc["mu"] = window.mu;
    doc["eta"] = window.eta;
    emit(out, doc, opt.format);
    return 0;
  }

  if (name == "mc") {
    Json suites = Json::array();
    std::size_t violations = 0;
    auto run_one = [&](const std::string& suite_name) {
      SuiteResult r = run_bound_suite(suite_name, opt.seed, opt.trials);
      violations += r.violations;
      suites.push_back({{"name", r.name},
                        {"trials", r.trials},
                        {"violations", r.violations},
                        {"worst_ratio", r.worst_ratio},
                        {"mean_ratio", r.mean_ratio},
                        {"resamples", r.resamples}});
    };
    if (!opt.suite.empty()) {
      run_one(opt.suite);
    } else {
      for (const std::string& suite_name : bound_suite_names())
        run_one(suite_name);
    }
    doc["seed"] = opt.seed;
    doc["trials"] = opt.trials;
    doc["suites"] = suites;
    doc["total_violations"] = violations;
    emit(out, doc, opt.format);
    return 0;
  }

  if (name == "bracket") {
    if (opt.matrix.empty() || !opt.data_error)
      throw Error(ErrorCode::InvalidArgument,
                  "bound bracket needs --matrix and --data-error");
    DenseMatrix A = parse_matrix_file(opt.matrix);
    ConditionBracket bracket =
        condition_bracket(A, *opt.data_error, opt.theta);
    doc["lo"] = bracket.lo;
    doc["hi"] = bracket.hi;
    emit(out, doc, opt.format);
    return 0;
  }

  if (name == "stacked") {
    if (opt.matrix.empty() || !opt.mu)
      throw Error(ErrorCode::InvalidArgument,
                  "bound stacked needs --matrix, --theta and --mu");
    DenseMatrix A = parse_matrix_file(opt.matrix);
    StackedNorms norms = stacked_operator_norms(A, opt.theta, *opt.mu, guard);
    doc["norm"] = norms.norm;
    doc["pinv_norm"] = norms.pinv_norm;
    emit(out, doc, opt.format);
    return 0;
  }

  // Paired-data evaluators share the (A, A~, b, b~) flags.
  if (opt.matrix.empty() || opt.matrix2.empty())
    throw Error(ErrorCode::InvalidArgument,
                "bound " + name + " needs --matrix and --matrix2");
  DenseMatrix A = parse_matrix_file(opt.matrix);
  DenseMatrix At = parse_matrix_file(opt.matrix2);

  BoundInput in;
  in.A = A;
  in.dA = At - A;
  if (!opt.rhs.empty()) in.b = parse_vector_file(opt.rhs);
  if (!opt.rhs2.empty() && in.b) {
    DenseVector bt = parse_vector_file(opt.rhs2);
    in.db = bt - *in.b;
  }
  in.r = opt.rank.value_or(exact_rank(svd(A)));
  if (opt.theta > 0.0) in.theta = opt.theta;

  if (name == "difference") {
    if (opt.matrix3.empty() || opt.rhs3.empty() || opt.x1.empty() ||
        opt.x2.empty() || opt.rhs.empty() || opt.rhs2.empty())
      throw Error(ErrorCode::InvalidArgument,
                  "bound difference needs --matrix/--rhs, --matrix2/--rhs2, "
                  "--matrix3/--rhs3, --x1, --x2");
    DifferenceInput din{A,
                        parse_vector_file(opt.rhs),
                        At,
                        parse_vector_file(opt.rhs2),
                        parse_vector_file(opt.x1),
                        parse_matrix_file(opt.matrix3),
                        parse_vector_file(opt.rhs3),
                        parse_vector_file(opt.x2),
                        in.r};
    doc = bound_value_json(difference_in_kernel_bound(din));
    emit(out, doc, opt.format);
    return 0;
  }

  BoundValue bound;
  if (name == "wedin") {
    bound = wedin_kernel_bound(in);
  } else if (name == "rank-preserving") {
    bound = rank_preserving_kernel_bound(in);
  } else if (name == "consistent") {
    bound = consistent_solution_bound(in);
  } else if (name == "underdetermined") {
    bound = underdetermined_minnorm_bound(in);
  } else if (name == "homogeneous") {
    bound = homogeneous_forward_bound(in);
  } else if (name == "general") {
    bound = general_forward_bound(in);
  } else if (name == "particular") {
    ParticularSolutionBound p = particular_solution_bound(in, opt.xnorm);
    doc = bound_value_json(p.bound);
    if (p.unit_homogeneous) doc["unit_homogeneous"] = *p.unit_homogeneous;
    if (p.inverse_iteration) doc["inverse_iteration"] = *p.inverse_iteration;
    emit(out, doc, opt.format);
    return 0;
  } else if (name == "illcond") {
    bound = illcond_containment_bound(in);
  } else if (name == "tsvd") {
    bound = tsvd_perturbation_bound(in);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown bound '" + name + "'");
  }
  doc = bound_value_json(bound);
  emit(out, doc, opt.format);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"general numerical solutions of singular linear systems"};
  app.require_subcommand(1);
  CommonOptions opt;

  auto add_io = [&](CLI::App* cmd) {
    cmd->add_option("--matrix", opt.matrix);
    cmd->add_option("--rhs", opt.rhs);
    cmd->add_option("--matrix2", opt.matrix2);
    cmd->add_option("--rhs2", opt.rhs2);
    cmd->add_option("--format", opt.format)
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--seed", opt.seed);
  };

  CLI::App* rank = app.add_subcommand("rank", "numerical rank within theta");
  add_io(rank);
  rank->add_option("--theta", opt.theta)->required();

  CLI::App* kernel = app.add_subcommand("kernel", "numerical kernel basis");
  add_io(kernel);
  kernel->add_option("--theta", opt.theta)->required();

  CLI::App* solve =
      app.add_subcommand("solve", "general numerical solution");
  add_io(solve);
  solve->add_option("--theta", opt.theta)->required();
  double mu_value = 0.0, alpha_value = 0.0;
  CLI::Option* mu_opt = solve->add_option("--mu", mu_value);
  CLI::Option* alpha_opt = solve->add_option("--alpha", alpha_value);
  double solve_data_error = 0.0;
  CLI::Option* solve_err_opt = solve->add_option("--data-error", solve_data_error);

  CLI::App* dist = app.add_subcommand("dist", "distance between solution sets");
  add_io(dist);

  CLI::App* bound = app.add_subcommand("bound", "bound evaluators and windows");
  add_io(bound);
  std::string bound_name;
  bound->add_option("name", bound_name)->required();
  bound->add_option("--theta", opt.theta);
  double bound_mu = 0.0, data_error = 0.0;
  CLI::Option* bound_mu_opt = bound->add_option("--mu", bound_mu);
  CLI::Option* data_error_opt = bound->add_option("--data-error", data_error);
  std::size_t rank_value = 0;
  CLI::Option* rank_opt = bound->add_option("--rank", rank_value);
  bound->add_option("--xnorm", opt.xnorm);
  bound->add_option("--trials", opt.trials);
  bound->add_option("--suite", opt.suite);
  bound->add_option("--matrix3", opt.matrix3);
  bound->add_option("--rhs3", opt.rhs3);
  bound->add_option("--x1", opt.x1);
  bound->add_option("--x2", opt.x2);

  CLI::App* demo = app.add_subcommand("demo", "run a worked case study");
  add_io(demo);
  std::string demo_name;
  demo->add_option("name", demo_name)->required();
  demo->add_option("--t", opt.t_param);
  demo->add_option("--size", opt.size);
  demo->add_option("--dump-dir", opt.dump_dir);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e, out, err);  // --help
    }
    err << e.what() << "\n";
    return 2;
  }

  try {
    double guard = guard_from_env();

    if (rank->parsed() || kernel->parsed()) {
      if (opt.matrix.empty())
        throw Error(ErrorCode::InvalidArgument, "--matrix is required");
      DenseMatrix A = parse_matrix_file(opt.matrix);
      SvdFactorization f = svd(A);
      RankDecision decision = numerical_rank(f, opt.theta, guard);
      Json doc;
      doc["rank"] = decision.rank;
      doc["theta"] = decision.theta;
      if (decision.sigma_r) doc["sigma_r"] = *decision.sigma_r;
      doc["sigma_r_plus_1"] = decision.sigma_r_plus_1;
      doc["guard"] = std::isinf(decision.guard) ? Json("infinite")
                                                : Json(decision.guard);
      if (kernel->parsed()) {
        ThetaProjection P(f, decision);
        doc["kernel_dimension"] = A.cols() - decision.rank;
        doc["kernel"] = json_from_matrix(P.kernel_basis());
      }
      emit(out, doc, opt.format);
      return 0;
    }

    if (solve->parsed()) {
      if (opt.matrix.empty() || opt.rhs.empty())
        throw Error(ErrorCode::InvalidArgument,
                    "--matrix and --rhs are required");
      DenseMatrix A = parse_matrix_file(opt.matrix);
      DenseVector b = parse_vector_file(opt.rhs);
      SolverConfig cfg;
      cfg.theta = opt.theta;
      cfg.guard = guard;
      if (mu_opt->count()) cfg.mu = mu_value;
      if (alpha_opt->count()) cfg.tikhonov_alpha = alpha_value;
      if (solve_err_opt->count()) opt.data_error = solve_data_error;
      GeneralSolution solution = solve_general(A, b, cfg);
      Json inputs;
      inputs["matrix"] = opt.matrix;
      inputs["rhs"] = opt.rhs;
      inputs["theta"] = opt.theta;
      Json doc = solve_document(inputs, solution, classic_condition(A));
      if (opt.data_error) {
        // Evaluate the data-error-driven diagnostics for a perturbation of
        // the stated spectral norm (only norms enter the formulas).
        DenseMatrix dA = DenseMatrix::zero(A.rows(), A.cols());
        dA(0, 0) = Scalar(*opt.data_error, 0.0);
        BoundInput in{A, dA, b, std::nullopt, solution.report.rank,
                      opt.theta};
        Json bounds;
        try {
          ToleranceWindow window = tolerance_window(A, *opt.data_error, b);
          bounds["window"] = {{"mu", window.mu}, {"eta", window.eta}};
        } catch (const Error& e) {
          bounds["window"] = e.name();
        }
        bounds["homogeneous_forward"] =
            bound_value_json(homogeneous_forward_bound(in));
        bounds["general_forward"] = bound_value_json(general_forward_bound(in));
        bounds["lipschitz_diagnostic"] = lipschitz_diagnostic(A, b, opt.theta, guard);
        doc["bounds"] = bounds;
      }
      emit(out, doc, opt.format);
      return 0;
    }

    if (dist->parsed()) {
      if (opt.matrix.empty() || opt.rhs.empty() || opt.matrix2.empty() ||
          opt.rhs2.empty())
        throw Error(ErrorCode::InvalidArgument,
                    "dist needs --matrix/--rhs and --matrix2/--rhs2");
      double value = solution_distance(
          parse_matrix_file(opt.matrix), parse_vector_file(opt.rhs),
          parse_matrix_file(opt.matrix2), parse_vector_file(opt.rhs2));
      Json doc;
      doc["distance"] = value;
      emit(out, doc, opt.format);
      return 0;
    }

    if (bound->parsed()) {
      if (bound_mu_opt->count()) opt.mu = bound_mu;
      if (data_error_opt->count()) opt.data_error = data_error;
      if (rank_opt->count()) opt.rank = rank_value;
      return bound_command(bound_name, opt, out);
    }

    if (demo->parsed()) return demo_command(demo_name, opt, out);

    err << "no subcommand\n";
    return 2;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return e.is_usage() ? 2 : 3;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 2;
  }
}

}  // namespace grasslin
