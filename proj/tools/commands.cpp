#include "commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "deblur/csv.hpp"
#include "deblur/io_util.hpp"
#include "deblur/manifest.hpp"
#include "deblur/multilevel.hpp"
#include "deblur/noise.hpp"
#include "deblur/param_select.hpp"
#include "deblur/pgm_io.hpp"
#include "deblur/psf.hpp"
#include "deblur/regularization.hpp"
#include "deblur/svd_filter.hpp"

namespace fs = std::filesystem;

namespace deblur::cli {

namespace {

int map_exit(const Error& ex) {
  if (dynamic_cast<const TooLarge*>(&ex)) return kExitGuard;
  if (dynamic_cast<const TooDeep*>(&ex) || dynamic_cast<const NotSeparable*>(&ex)) {
    return kExitHierarchy;
  }
  if (dynamic_cast<const NotBracketed*>(&ex) || dynamic_cast<const NotConverged*>(&ex) ||
      dynamic_cast<const SingularOperator*>(&ex) ||
      dynamic_cast<const NullSpaceOverlap*>(&ex) || dynamic_cast<const FlatCurve*>(&ex) ||
      dynamic_cast<const TooFewPoints*>(&ex)) {
    return kExitSolver;
  }
  if (dynamic_cast<const IoError*>(&ex) || dynamic_cast<const MalformedFile*>(&ex)) {
    return kExitIo;
  }
  return kExitFlags;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return map_exit(ex);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitFlags;
  }
}

// DEBLUR_THREADS caps internal parallelism. The kernels are single-threaded,
// so any positive value is honored trivially; it is still validated here so
// misconfigured environments fail loudly.
void check_threads_env() {
  const char* env = std::getenv("DEBLUR_THREADS");
  if (!env) return;
  const long n = std::strtol(env, nullptr, 10);
  if (n < 1) {
    std::cerr << "warning: ignoring DEBLUR_THREADS='" << env << "' (need a positive integer)\n";
  }
}

struct Scene {
  Manifest manifest;
  OperatorDescriptor desc;
  BlurOperator op;
  Image x_true;
  Image b;
  fs::path dir;
};

Scene load_scene(const std::string& scene_dir) {
  const fs::path dir(scene_dir);
  Manifest manifest = Manifest::load(dir / "manifest.txt");
  OperatorDescriptor desc = OperatorDescriptor::read_from(manifest);
  BlurOperator op = operator_from_descriptor(desc);
  Image x_true = read_pgm(dir / "x_true.pgm");
  Image b = read_pgm(dir / "b.pgm");
  if (b.rows() != desc.p || b.cols() != desc.q) {
    throw MalformedFile("scene images disagree with the manifest dimensions");
  }
  return {std::move(manifest), desc, std::move(op), std::move(x_true), std::move(b), dir};
}

double noise_norm_from(const Scene& scene, const std::string& spec_value) {
  if (spec_value == "auto") return scene.manifest.get_double("e_norm");
  const double delta = std::strtod(spec_value.c_str(), nullptr);
  if (!(delta > 0.0)) throw BadGrid("discrepancy delta must be positive");
  return delta;
}

struct Selector {
  enum class Kind { LCurve, Discrepancy, Fixed } kind = Kind::LCurve;
  std::string value;  // "auto" or a number
};

Selector parse_selector(const std::string& text) {
  Selector sel;
  if (text == "lcurve") {
    sel.kind = Selector::Kind::LCurve;
    return sel;
  }
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  if (colon != std::string::npos) sel.value = text.substr(colon + 1);
  if (head == "discrepancy") {
    sel.kind = Selector::Kind::Discrepancy;
    if (sel.value.empty()) sel.value = "auto";
    return sel;
  }
  if (head == "fixed") {
    sel.kind = Selector::Kind::Fixed;
    if (sel.value.empty()) throw BadGrid("fixed selector needs a value, e.g. fixed:0.01");
    return sel;
  }
  throw BadGrid("unknown selector '" + text + "' (use lcurve | discrepancy:<delta|auto> | fixed:<value>)");
}

double parse_positive(const std::string& text, const char* what) {
  const double v = std::strtod(text.c_str(), nullptr);
  if (!(v > 0.0)) throw BadGrid(std::string(what) + " must be positive, got '" + text + "'");
  return v;
}

} // namespace

int run_simulate(const SimulateArgs& args) {
  return guarded([&]() {
    check_threads_env();
    if (args.out.empty()) throw BadGrid("simulate needs an output directory (-o)");
    const NoiseSpec noise = NoiseSpec::parse(args.noise, args.seed);
    const SceneKind kind = scene_kind_from_string(args.scene);
    const int hw = args.half_width >= 0 ? args.half_width : default_half_width(args.s);
    const GaussianPsf psf = gaussian_psf_2d(hw, args.s);
    const BoundaryCondition bc = boundary_condition_from_string(args.bc);
    const Index p = args.size;

    const BlurOperator op = build_operator(psf, bc, p, p);
    const Image x_true = generate_test_image(kind, p);
    const Image b_true = op.apply(x_true);
    const auto [b_vec, e_vec] = apply_noise(vec(b_true), noise);

    const fs::path dir(args.out);
    fs::create_directories(dir);
    write_pgm(dir / "x_true.pgm", x_true, args.seed);
    write_pgm(dir / "b_true.pgm", b_true, args.seed);
    write_pgm(dir / "b.pgm", unvec(b_vec, p, p), args.seed);
    write_pgm(dir / "e.pgm", unvec(e_vec, p, p), args.seed);

    Manifest m;
    m.set("seed", args.seed);
    m.set("scene", args.scene);
    m.set("noise", args.noise);
    OperatorDescriptor desc;
    desc.kind = op.kind();
    desc.bc = bc;
    desc.s = args.s;
    desc.half_width = hw;
    desc.p = desc.q = p;
    desc.write_to(m);
    m.set("e_norm", e_vec.norm());
    m.set("b_true_norm", vec(b_true).norm());
    m.set("x_true_file", "x_true.pgm");
    m.set("b_true_file", "b_true.pgm");
    m.set("b_file", "b.pgm");
    m.set("e_file", "e.pgm");
    m.save(dir / "manifest.txt");
    return 0;
  });
}

int run_deblur(const DeblurArgs& args) {
  return guarded([&]() {
    check_threads_env();
    const Scene scene = load_scene(args.scene_dir);
    const fs::path out_dir(args.out.empty() ? args.scene_dir : args.out);
    fs::create_directories(out_dir);
    const Vector b = vec(scene.b);
    const Vector x_true = vec(scene.x_true);
    const Index p = scene.desc.p;

    std::string method = args.method;
    std::string method_param;
    if (const auto colon = method.find(':'); colon != std::string::npos) {
      method_param = method.substr(colon + 1);
      method = method.substr(0, colon);
    }

    std::string select_text = args.select;
    if (select_text.empty()) {
      if (method == "naive") select_text = "fixed:1";  // parameter unused
      else if (method == "tikhonov" || method == "tsvd") select_text = "lcurve";
      else select_text = "discrepancy:auto";
    }
    const Selector sel = parse_selector(select_text);

    Vector x;
    double lambda = 0.0, mu = 0.0;
    std::string parameter;
    std::vector<SolverTraceRow> tv_trace;

    if (method == "naive") {
      const SvdFactorization svd = svd_of(scene.op);
      x = filtered_solve(svd, b, FilterSpec::naive());
      parameter = "none";
    } else if (method == "tsvd") {
      const SvdFactorization svd = svd_of(scene.op);
      Index k = 0;
      if (!method_param.empty()) {
        k = static_cast<Index>(std::strtol(method_param.c_str(), nullptr, 10));
      } else if (sel.kind == Selector::Kind::Discrepancy) {
        k = discrepancy_tsvd_cutoff(svd, b, noise_norm_from(scene, sel.value), args.tau);
      } else if (sel.kind == Selector::Kind::Fixed) {
        k = static_cast<Index>(parse_positive(sel.value, "tsvd cutoff"));
      } else {
        throw BadGrid("tsvd needs an explicit cutoff (tsvd:k) or the discrepancy selector");
      }
      x = filtered_solve(svd, b, FilterSpec::tsvd(k));
      parameter = std::to_string(k);
    } else if (method == "tikhonov") {
      const SvdFactorization svd = svd_of(scene.op);
      switch (sel.kind) {
        case Selector::Kind::LCurve: {
          const auto grid = default_lambda_grid(svd, args.grid_points);
          const auto points = lcurve_scan(svd, b, grid);
          const LCurveCorner corner = lcurve_corner(points);
          if (corner.weak) {
            std::cerr << "warning: weak L-curve corner; the choice of lambda may be "
                         "unreliable\n";
          }
          lambda = corner.lambda;
          break;
        }
        case Selector::Kind::Discrepancy:
          lambda = discrepancy_lambda(svd, b, noise_norm_from(scene, sel.value), args.tau);
          break;
        case Selector::Kind::Fixed:
          lambda = parse_positive(sel.value, "lambda");
          break;
      }
      mu = lambda * lambda;
      x = filtered_solve(svd, b, FilterSpec::tikhonov(lambda));
      parameter = format_double(lambda);
    } else if (method == "gtik" || method == "tv") {
      const RegularizerL L = derivative_operator(p);
      if (sel.kind == Selector::Kind::LCurve) {
        throw BadGrid("the L-curve selector applies to the SVD-filter methods only");
      }
      if (method == "gtik") {
        mu = sel.kind == Selector::Kind::Fixed
                 ? parse_positive(sel.value, "mu")
                 : discrepancy_mu_general(scene.op, b, L,
                                          noise_norm_from(scene, sel.value), args.tau);
        x = general_tikhonov_solve(scene.op, b, L, mu);
      } else {
        mu = sel.kind == Selector::Kind::Fixed
                 ? parse_positive(sel.value, "lambda_tv")
                 : discrepancy_lambda_tv(scene.op, b, L,
                                         noise_norm_from(scene, sel.value), args.tau);
        const TvResult tv = tv_irls_solve(scene.op, b, L, mu);
        if (!tv.converged) {
          std::cerr << "warning: IRLS stopped at max_outer without meeting tol\n";
        }
        x = tv.x;
        tv_trace = tv.trace;
      }
      lambda = std::sqrt(mu);
      parameter = format_double(mu);
    } else {
      throw BadGrid("unknown method '" + method +
                    "' (use naive | tsvd[:k] | tikhonov | gtik | tv)");
    }

    write_pgm(out_dir / "x_reg.pgm", unvec(x, p, p));
    ErrorReport metrics;
    metrics.relative_error = relative_error(x, x_true);
    metrics.residual_norm = (scene.op.apply_vec(x) - b).norm();
    metrics.solution_norm = x.norm();
    CsvTable report;
    report.header = {"method", "selector", "parameter", "lambda", "mu",
                     "relative_error", "residual_norm", "solution_norm"};
    report.add_row({args.method, select_text, parameter,
                    lambda > 0 ? format_double(lambda) : "",
                    mu > 0 ? format_double(mu) : "",
                    format_double(metrics.relative_error),
                    format_double(metrics.residual_norm),
                    format_double(metrics.solution_norm)});
    report.save(out_dir / "report.csv");
    if (!tv_trace.empty()) trace_csv(tv_trace).save(out_dir / "tv_trace.csv");
    return 0;
  });
}

int run_analyze(const AnalyzeArgs& args) {
  return guarded([&]() {
    check_threads_env();
    const Scene scene = load_scene(args.scene_dir);
    const fs::path out_dir(args.out.empty() ? args.scene_dir : args.out);
    fs::create_directories(out_dir);
    const Vector b = vec(scene.b);

    const SvdFactorization svd = svd_of(scene.op);
    sigma_csv(svd.singular_values()).save(out_dir / "sigma.csv");
    picard_csv(picard_coefficients(svd, b)).save(out_dir / "picard.csv");

    const auto grid = default_lambda_grid(svd, args.grid_points);
    const auto points = lcurve_scan(svd, b, grid);
    LCurveCorner corner;
    const LCurveCorner* corner_ptr = nullptr;
    try {
      corner = lcurve_corner(points);
      corner_ptr = &corner;
    } catch (const FlatCurve&) {
      // no bend: export the scan without a marked corner
    }
    lcurve_csv(points, corner_ptr).save(out_dir / "lcurve.csv");

    const Vector coeff_true = svd.project_right(vec(scene.x_true)).cwiseAbs();
    const Vector x_ls = filtered_solve(svd, b, FilterSpec::naive());
    const Vector coeff_ls = svd.project_right(x_ls).cwiseAbs();
    coefficients_csv(coeff_true, coeff_ls).save(out_dir / "coefficients.csv");
    return 0;
  });
}

int run_multilevel(const MultilevelArgs& args) {
  return guarded([&]() {
    check_threads_env();
    const Scene scene = load_scene(args.scene_dir);
    const fs::path out_dir(args.out.empty() ? args.scene_dir : args.out);
    fs::create_directories(out_dir);

    const CoarseMethod method = args.method == "tv" ? CoarseMethod::Tv : CoarseMethod::Tikhonov;
    if (args.method != "tv" && args.method != "tikhonov") {
      throw BadGrid("multilevel method must be tikhonov or tv");
    }
    const Selector sel = parse_selector(args.select);
    if (sel.kind == Selector::Kind::LCurve) {
      throw BadGrid("multilevel supports discrepancy and fixed selectors");
    }

    const LevelHierarchy h = build_hierarchy(scene.op, scene.b, args.levels);

    Image noise_image;
    LevelSelector level_sel;
    level_sel.tau = args.tau;
    if (sel.kind == Selector::Kind::Fixed) {
      level_sel.kind = LevelSelector::Kind::Fixed;
      level_sel.value = parse_positive(sel.value, "fixed parameter");
    } else {
      level_sel.kind = LevelSelector::Kind::Discrepancy;
      if (sel.value == "auto" && scene.manifest.has("e_file")) {
        noise_image = read_pgm(scene.dir / scene.manifest.get_or_throw("e_file"));
        level_sel.noise = &noise_image;
      } else {
        level_sel.value = noise_norm_from(scene, sel.value);
      }
    }

    Manifest report;
    report.set("levels", static_cast<std::int64_t>(args.levels));
    report.set("method", args.method);
    report.set("select", args.select);
    for (Index n = 0; n <= h.depth(); ++n) {
      const auto& lvl = h.levels[static_cast<std::size_t>(n)];
      write_pgm(out_dir / ("b_level" + std::to_string(n) + ".pgm"), lvl.b);
      const MultilevelSolveResult res = multilevel_solve(h, n, method, level_sel);
      write_pgm(out_dir / ("x_level" + std::to_string(n) + ".pgm"), res.x);
      report.set("mu_level" + std::to_string(n), res.mu);
      if (level_sel.kind == LevelSelector::Kind::Discrepancy) {
        report.set("delta_level" + std::to_string(n), res.delta);
      }
      // coarse reconstructions compared against the restricted truth
      Image x_ref = scene.x_true;
      for (Index i = 0; i < n; ++i) x_ref = restrict_image(x_ref);
      report.set("relative_error_level" + std::to_string(n),
                 relative_error(res.x, x_ref));
    }
    write_file_atomic(out_dir / "hierarchy.txt", hierarchy_manifest(h));
    report.save(out_dir / "multilevel.txt");
    return 0;
  });
}

int run_repro_figures(const ReproArgs& args) {
  return guarded([&]() {
    if (args.out.empty()) throw BadGrid("repro-figures needs an output directory (-o)");
    const fs::path root(args.out);
    fs::create_directories(root);

    SimulateArgs sim;
    sim.seed = args.seed;
    sim.out = (root / "scene").string();
    if (int rc = run_simulate(sim)) return rc;

    AnalyzeArgs an;
    an.scene_dir = sim.out;
    an.out = (root / "analysis").string();
    if (int rc = run_analyze(an)) return rc;

    const std::vector<std::pair<std::string, std::string>> runs = {
        {"naive", ""},
        {"tikhonov", "lcurve"},
        {"tikhonov", "discrepancy:auto"},
        {"gtik", "discrepancy:auto"},
        {"tv", "discrepancy:auto"},
    };
    for (const auto& [method, select] : runs) {
      DeblurArgs d;
      d.scene_dir = sim.out;
      d.method = method;
      d.select = select;
      std::string tag = method;
      if (!select.empty()) tag += "_" + select.substr(0, select.find(':'));
      d.out = (root / ("recon_" + tag)).string();
      if (int rc = run_deblur(d)) return rc;
    }

    for (const std::string method : {"tikhonov", "tv"}) {
      MultilevelArgs ml;
      ml.scene_dir = sim.out;
      ml.levels = 1;
      ml.method = method;
      ml.out = (root / ("multilevel_" + method)).string();
      if (int rc = run_multilevel(ml)) return rc;
    }
    return 0;
  });
}

} // namespace deblur::cli
