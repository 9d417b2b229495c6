#include "airyspec/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <thread>

#include "airyspec/airy.hpp"
#include "airyspec/norms.hpp"

namespace airyspec {

namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

Regime parse_regime(const std::string& s) {
  static const std::map<std::string, Regime> m = {
      {"free-line", Regime::FreeLine},       {"dirichlet", Regime::Dirichlet},
      {"neumann", Regime::Neumann},          {"robin", Regime::Robin},
      {"transmission", Regime::Transmission}, {"laplacian-barrier", Regime::FreeLaplacianBarrier}};
  auto it = m.find(s);
  if (it == m.end()) throw Error(ErrorCode::Validation, "unknown regime '" + s + "'");
  return it->second;
}

std::optional<Branch> parse_branch(const std::string& s) {
  if (s == "plus") return Branch::Plus;
  if (s == "minus") return Branch::Minus;
  if (s == "both") return std::nullopt;
  throw Error(ErrorCode::Validation, "unknown branch '" + s + "'");
}

Sign parse_sign(const std::string& s) {
  if (s == "plus") return Sign::PlusIx;
  if (s == "minus") return Sign::MinusIx;
  throw Error(ErrorCode::Validation, "unknown sign '" + s + "'");
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw Error(ErrorCode::Validation, "unknown format '" + s + "'");
}

std::vector<Branch> branches(const RunConfig& c) {
  if (c.branch) return {*c.branch};
  return {Branch::Plus, Branch::Minus};
}

Format output_format(const RunConfig& c) {
  if (c.format) return *c.format;
  const std::string& p = c.output_path;
  if (p.size() >= 5 && p.compare(p.size() - 5, 5, ".json") == 0) return Format::Json;
  if (p.size() >= 4 && p.compare(p.size() - 4, 4, ".csv") == 0) return Format::Csv;
  return c.subcommand == Subcommand::Spectrum ? Format::Json : Format::Csv;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::Validation, what);
}

struct PrintedRow {
  double kappa, L;
  cplx l1, l3, l5;
};

// Reference convergence table; L = infinity stored as inf, with no lambda_3.
const std::vector<PrintedRow>& printed_table() {
  const double inf = std::numeric_limits<double>::infinity();
  static const std::vector<PrintedRow> rows = {
      {0, 4, {0.5161, -0.8918}, {1.2938, -2.1938}, {3.7675, -1.9790}},
      {0, 6, {0.5094, -0.8823}, {1.1755, -3.9759}, {1.6066, -2.7134}},
      {0, 8, {0.5094, -0.8823}, {1.1691, -5.9752}, {1.6233, -2.8122}},
      {0, 10, {0.5094, -0.8823}, {1.1691, -7.9751}, {1.6241, -2.8130}},
      {0, inf, {0.5094, -0.8823}, {}, {1.6241, -2.8130}},
      {1, 4, {1.0516, -1.0591}, {1.3441, -2.0460}, {4.1035, -1.7639}},
      {1, 6, {1.0032, -1.0364}, {1.1725, -3.9739}, {1.7783, -2.7043}},
      {1, 8, {1.0029, -1.0363}, {1.1691, -5.9751}, {1.8364, -2.8672}},
      {1, 10, {1.0029, -1.0363}, {1.1691, -7.9751}, {1.8390, -2.8685}},
      {1, inf, {1.0029, -1.0363}, {}, {1.8390, -2.8685}},
  };
  return rows;
}

Table table_of_records(const std::vector<EigenvalueRecord>& recs) {
  Table t;
  t.columns = {"n", "branch", "re", "im", "residual", "method", "kappa", "regime", "delta"};
  for (const auto& r : recs) {
    t.rows.push_back({double(r.n), std::string(branch_name(r.branch)), r.lambda.real(), r.lambda.imag(), r.residual,
                      std::string(r.method == Method::ExactNewton ? "exact-newton" : "galerkin"), r.kappa,
                      std::string(regime_name(r.regime)), r.delta});
  }
  return t;
}

}  // namespace

const char* subcommand_name(Subcommand s) noexcept {
  switch (s) {
    case Subcommand::Spectrum: return "spectrum";
    case Subcommand::Galerkin: return "galerkin";
    case Subcommand::Pseudospectrum: return "pseudospectrum";
    case Subcommand::Table1: return "table1";
    case Subcommand::Kernel: return "kernel";
    case Subcommand::Norms: return "norms";
    case Subcommand::Semigroup: return "semigroup";
    case Subcommand::Delta: return "delta";
    case Subcommand::Zeros: return "zeros";
    case Subcommand::Projector: return "projector";
  }
  return "?";
}

void validate(const RunConfig& c) {
  require(std::isfinite(c.problem.kappa) && c.problem.kappa >= 0, "kappa must be finite and >= 0");
  require(c.n >= 1, "n must be >= 1");
  require(c.n_max >= 1 && c.n_max <= 100000, "n-max must lie in [1, 100000]");
  require(std::isfinite(c.L) && c.L > 0, "L must be finite and > 0");
  require(c.n_trunc >= 4 && c.n_trunc % 2 == 0 && c.n_trunc <= 4000, "trunc must be even and in [4, 4000]");
  const GridSpec& g = c.grid;
  for (double v : {g.re_min, g.re_max, g.im_min, g.im_max}) require(std::isfinite(v), "grid bounds must be finite");
  require(g.re_min <= g.re_max && g.im_min <= g.im_max, "grid bounds must be ordered");
  require(g.nx >= 1 && g.ny >= 1 && double(g.nx) * g.ny <= 4e6, "grid resolution must be positive");
  require(is_finite(c.lambda), "lambda must be finite");
  require(std::isfinite(c.t_max) && c.t_max > 0, "t-max must be > 0");
  require(c.steps >= 2, "steps must be >= 2");
  require(c.threads >= 1, "threads must be >= 1");
  if (c.subcommand == Subcommand::Delta) require(c.n_max >= 20, "delta needs n-max >= 20");
}

std::string describe(const RunConfig& c) {
  std::string s = std::string("subcommand=") + subcommand_name(c.subcommand);
  auto add = [&](const std::string& k, const std::string& v) { s += " " + k + "=" + v; };
  const std::string branch = c.branch ? branch_name(*c.branch) : "both";
  const std::string grid = num(c.grid.re_min) + "," + num(c.grid.re_max) + "," + num(c.grid.im_min) + "," +
                           num(c.grid.im_max) + "," + std::to_string(c.grid.nx) + "," + std::to_string(c.grid.ny);
  switch (c.subcommand) {
    case Subcommand::Spectrum:
      add("regime", regime_name(c.problem.regime));
      add("kappa", num(c.problem.kappa));
      add("n-max", std::to_string(c.n_max));
      add("branch", branch);
      break;
    case Subcommand::Galerkin:
      add("L", num(c.L));
      add("kappa", num(c.problem.kappa));
      add("trunc", std::to_string(c.n_trunc));
      break;
    case Subcommand::Pseudospectrum:
      add("L", num(c.L));
      add("kappa", num(c.problem.kappa));
      add("trunc", std::to_string(c.n_trunc));
      add("grid", grid);
      break;
    case Subcommand::Table1:
      add("trunc", std::to_string(c.n_trunc));
      break;
    case Subcommand::Kernel:
      add("regime", regime_name(c.problem.regime));
      add("sign", c.problem.sign == Sign::PlusIx ? "plus" : "minus");
      add("kappa", num(c.problem.kappa));
      add("lambda", num(c.lambda.real()) + "," + num(c.lambda.imag()));
      add("grid", grid);
      break;
    case Subcommand::Norms:
      add("regime", regime_name(c.problem.regime));
      add("sign", c.problem.sign == Sign::PlusIx ? "plus" : "minus");
      add("kappa", num(c.problem.kappa));
      add("lambda", num(c.lambda.real()) + "," + num(c.lambda.imag()));
      break;
    case Subcommand::Semigroup:
      add("L", num(c.L));
      add("kappa", num(c.problem.kappa));
      add("trunc", std::to_string(c.n_trunc));
      add("t-max", num(c.t_max));
      add("steps", std::to_string(c.steps));
      break;
    case Subcommand::Delta:
      add("kappa", num(c.problem.kappa));
      add("n-max", std::to_string(c.n_max));
      break;
    case Subcommand::Zeros:
      add("n-max", std::to_string(c.n_max));
      break;
    case Subcommand::Projector:
      add("kappa", num(c.problem.kappa));
      add("n", std::to_string(c.n));
      add("branch", branch);
      break;
  }
  return s;
}

std::vector<Table1Cell> table1_cells(int n_trunc) {
  std::vector<Table1Cell> out;
  for (const auto& row : printed_table()) {
    std::vector<std::pair<int, cplx>> computed;
    if (std::isinf(row.L)) {
      const SpectralProblem p{Regime::Transmission, row.kappa, Sign::PlusIx};
      computed = {{1, solve_eigenvalue(p, 1, Branch::Plus).lambda}, {5, solve_eigenvalue(p, 2, Branch::Plus).lambda}};
    } else {
      const auto ev = eigenvalues(build_model(row.L, row.kappa, n_trunc));
      computed = {{1, ev.at(0).lambda}, {3, ev.at(2).lambda}, {5, ev.at(4).lambda}};
    }
    for (const auto& [col, val] : computed) {
      Table1Cell cell;
      cell.kappa = row.kappa;
      cell.L = row.L;
      cell.column = col;
      cell.computed = val;
      cell.printed = col == 1 ? row.l1 : col == 3 ? row.l3 : row.l5;
      cell.deviation = std::max(std::abs(val.real() - cell.printed.real()), std::abs(val.imag() - cell.printed.imag()));
      cell.flagged = cell.deviation > 1e-4;
      out.push_back(cell);
    }
  }
  return out;
}

int thread_budget() {
  int hw = int(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("AIRY_SPECTRAL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
      throw Error(ErrorCode::Validation, "AIRY_SPECTRAL_THREADS must be a positive integer");
    }
    return int(std::min<long>(v, hw));
  }
  return hw;
}

Table compute(const RunConfig& c) {
  validate(c);
  Table t;
  switch (c.subcommand) {
    case Subcommand::Spectrum: {
      std::vector<EigenvalueRecord> recs;
      for (int n = 1; n <= c.n_max; ++n) {
        for (Branch b : branches(c)) recs.push_back(solve_eigenvalue(c.problem, n, b));
      }
      t = table_of_records(recs);
      break;
    }
    case Subcommand::Galerkin:
      t = table_of_records(eigenvalues(build_model(c.L, c.problem.kappa, c.n_trunc)));
      break;
    case Subcommand::Pseudospectrum: {
      const GalerkinModel m = build_model(c.L, c.problem.kappa, c.n_trunc);
      const PseudospecGrid g = pseudospectrum(m, c.grid, c.threads);
      t.columns = {"re", "im", "sigma_min"};
      for (int i = 0; i < c.grid.nx; ++i) {
        for (int j = 0; j < c.grid.ny; ++j) t.rows.push_back({c.grid.re(i), c.grid.im(j), g.values(i, j)});
      }
      break;
    }
    case Subcommand::Table1: {
      t.columns = {"kappa", "L", "column", "re", "im", "printed_re", "printed_im", "deviation", "flag"};
      for (const auto& cell : table1_cells(c.n_trunc)) {
        t.rows.push_back({cell.kappa, cell.L, double(cell.column), cell.computed.real(), cell.computed.imag(),
                          cell.printed.real(), cell.printed.imag(), cell.deviation,
                          std::string(cell.flagged ? "MISMATCH" : "ok")});
      }
      break;
    }
    case Subcommand::Kernel: {
      t.columns = {"x", "y", "re", "im"};
      for (int i = 0; i < c.grid.nx; ++i) {
        for (int j = 0; j < c.grid.ny; ++j) {
          const double x = c.grid.re(i), y = c.grid.im(j);
          const cplx v = kernel(c.problem, x, y, c.lambda);
          t.rows.push_back({x, y, v.real(), v.imag()});
        }
      }
      break;
    }
    case Subcommand::Norms: {
      const HsResult r = hs_norm(c.problem, c.lambda);
      t.columns = {"lambda_re", "lambda_im", "hs_norm", "quadrature_error", "log_scaled", "log_hs"};
      t.rows.push_back({r.lambda.real(), r.lambda.imag(), r.hs_norm, r.quadrature_error, double(r.log_scaled), r.log_hs});
      break;
    }
    case Subcommand::Semigroup: {
      const GalerkinModel m = build_model(c.L, c.problem.kappa, c.n_trunc);
      std::vector<double> grid;
      for (int i = 0; i < c.steps; ++i) grid.push_back(c.t_max * i / (c.steps - 1));
      const SemigroupDecay d = semigroup_decay(m, grid);
      t.columns = {"t", "norm", "fitted_rate"};
      for (const auto& [tt, nn] : d.norms) t.rows.push_back({tt, nn, d.rate});
      break;
    }
    case Subcommand::Delta: {
      const DeltaFit f = delta_fit(c.problem.kappa, c.n_max);
      t.columns = {"n", "delta", "c", "fit_from"};
      for (std::size_t i = 0; i < f.delta.size(); ++i) t.rows.push_back({double(i + 1), f.delta[i], f.c, double(f.fit_from)});
      break;
    }
    case Subcommand::Zeros: {
      t.columns = {"n", "a", "a_residual", "a_prime", "a_prime_residual"};
      for (int n = 1; n <= c.n_max; ++n) {
        const AiryZero a = airy_zero(n, ZeroKind::OfAi), b = airy_zero(n, ZeroKind::OfAiPrime);
        t.rows.push_back({double(n), a.location, a.residual, b.location, b.residual});
      }
      break;
    }
    case Subcommand::Projector: {
      t.columns = {"n", "branch", "re", "im", "norm", "psi2_re", "psi2_im", "idempotence_residual"};
      for (Branch b : branches(c)) {
        const EigenvalueRecord rec = solve_eigenvalue({Regime::Transmission, c.problem.kappa, Sign::PlusIx}, c.n, b);
        const ProjectorEval p = projector(rec);
        t.rows.push_back({double(c.n), std::string(branch_name(b)), rec.lambda.real(), rec.lambda.imag(), p.norm,
                          p.eigfun_sq_integral.real(), p.eigfun_sq_integral.imag(), p.idempotence_residual});
      }
      break;
    }
  }
  t.params = describe(c);
  t.utc = utc_now();
  return t;
}

int run(const RunConfig& c, std::ostream& err) {
  try {
    const Table t = compute(c);
    const std::string text = emit(t, output_format(c));
    if (c.output_path == "-") {
      std::cout << text;
    } else {
      std::ofstream out(c.output_path);
      if (!out) throw Error(ErrorCode::Validation, "cannot open output file " + c.output_path);
      out << text;
      if (!out) throw Error(ErrorCode::Validation, "write failed for " + c.output_path);
    }
    if (c.subcommand == Subcommand::Table1) {
      for (const auto& row : t.rows) {
        if (std::get<std::string>(row.back()) != "ok") {
          err << "table1: cell kappa=" << num(std::get<double>(row[0])) << " L=" << num(std::get<double>(row[1]))
              << " column=" << num(std::get<double>(row[2])) << " deviates from the printed value\n";
        }
      }
    }
    return 0;
  } catch (const Error& e) {
    err << subcommand_name(c.subcommand) << ": " << e.what() << " [" << describe(c)
        << "]\n";
    return e.code() == ErrorCode::Validation ? 2 : 3;
  } catch (const std::exception& e) {
    err << subcommand_name(c.subcommand) << ": " << e.what() << " [" << describe(c) << "]\n";
    return 3;
  }
}

int main_cli(int argc, char** argv) {
  CLI::App app{"Spectra, resolvents and pseudospectra of the complex Airy operator with a barrier"};
  app.set_config("--config", "", "key=value file with one [section] per subcommand");
  app.require_subcommand(1);
  app.fallthrough();
  app.allow_config_extras(CLI::config_extras_mode::error);

  RunConfig c;
  std::string regime = "transmission", branch = "plus", sign = "plus", format;
  std::vector<double> grid, lambda;

  struct Entry {
    Subcommand sub;
    const char* help;
  };
  const std::vector<Entry> entries = {
      {Subcommand::Spectrum, "exact eigenvalues by Newton iteration"},
      {Subcommand::Galerkin, "eigenvalues of the truncated matrix Lambda + iB"},
      {Subcommand::Pseudospectrum, "smallest singular value of M - lambda over a grid"},
      {Subcommand::Table1, "convergence table of Galerkin eigenvalues in L"},
      {Subcommand::Kernel, "resolvent kernel samples over an (x, y) grid"},
      {Subcommand::Norms, "Hilbert-Schmidt norm of the resolvent"},
      {Subcommand::Semigroup, "norm of exp(-tM) for the Galerkin matrix"},
      {Subcommand::Delta, "delta_n(kappa) and the fitted constant c"},
      {Subcommand::Zeros, "zeros of Ai and Ai'"},
      {Subcommand::Projector, "Riesz projector of a transmission eigenvalue"},
  };
  for (const auto& e : entries) {
    CLI::App* s = app.add_subcommand(subcommand_name(e.sub), e.help);
    s->callback([&c, e] { c.subcommand = e.sub; });
    s->add_option("--regime", regime, "free-line|dirichlet|neumann|robin|transmission|laplacian-barrier");
    s->add_option("--kappa", c.problem.kappa, "barrier permeability or Robin coefficient");
    s->add_option("--sign", sign, "sign of the potential: plus (+ix) or minus (-ix)");
    s->add_option("--n", c.n, "eigenvalue index");
    s->add_option("--n-max", c.n_max, "largest index");
    s->add_option("--branch", branch, "plus|minus|both");
    s->add_option("--L", c.L, "half-length of the Galerkin interval");
    s->add_option("--trunc", c.n_trunc, "Galerkin basis size");
    s->add_option("--grid", grid, "re_min re_max im_min im_max nx ny (x/y ranges for kernel)")->expected(6);
    s->add_option("--lambda", lambda, "spectral parameter: re im")->expected(2);
    s->add_option("--t-max", c.t_max, "largest semigroup time");
    s->add_option("--steps", c.steps, "number of semigroup times");
    s->add_option("--out", c.output_path, "output file, - for stdout");
    s->add_option("--format", format, "csv|json");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    c.problem.regime = parse_regime(regime);
    c.problem.sign = parse_sign(sign);
    c.branch = parse_branch(branch);
    if (!format.empty()) c.format = parse_format(format);
    if (!grid.empty()) {
      for (int k : {4, 5}) {
        require(grid[k] >= 1 && grid[k] <= 1e6 && grid[k] == std::floor(grid[k]),
                "grid resolution must be a positive integer");
      }
      c.grid = {grid[0], grid[1], grid[2], grid[3], int(grid[4]), int(grid[5])};
    } else if (c.subcommand == Subcommand::Kernel) {
      c.grid = {0.0, 2.0, 0.0, 2.0, 21, 21};
    }
    if (c.subcommand == Subcommand::Pseudospectrum && !app.get_subcommand("pseudospectrum")->count("--L")) {
      c.L = std::cbrt(1e4);
    }
    if (!lambda.empty()) c.lambda = {lambda[0], lambda[1]};
    c.threads = thread_budget();
  } catch (const Error& e) {
    std::cerr << subcommand_name(c.subcommand) << ": " << e.what() << "\n";
    return 2;
  }
  return run(c, std::cerr);
}

}  // namespace airyspec
