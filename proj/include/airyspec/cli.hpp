#pragma once

#include <ostream>
#include <optional>
#include <string>
#include <vector>

#include "airyspec/galerkin.hpp"
#include "airyspec/io.hpp"
#include "airyspec/kernels.hpp"
#include "airyspec/spectra.hpp"

namespace airyspec {

enum class Subcommand {
  Spectrum,
  Galerkin,
  Pseudospectrum,
  Table1,
  Kernel,
  Norms,
  Semigroup,
  Delta,
  Zeros,
  Projector,
};

const char* subcommand_name(Subcommand s) noexcept;

struct RunConfig {
  Subcommand subcommand = Subcommand::Spectrum;
  SpectralProblem problem{Regime::Transmission, 1.0, Sign::PlusIx};
  int n = 1;
  int n_max = 5;
  // Empty means both branches.
  std::optional<Branch> branch = Branch::Plus;
  double L = 10.0;
  int n_trunc = 100;
  GridSpec grid{0.0, 3.0, -8.0, 8.0, 61, 161};
  cplx lambda{1.0, 0.0};
  double t_max = 20.0;
  int steps = 40;
  std::string output_path = "-";
  std::optional<Format> format;
  int threads = 1;
};

// Validation of every numeric field; throws Error(Validation).
void validate(const RunConfig& c);

// Deterministic "key=value ..." echo of the fields the subcommand reads.
std::string describe(const RunConfig& c);

// Computes the result table without writing it.
Table compute(const RunConfig& c);

struct Table1Cell {
  double kappa = 0.0;
  double L = 0.0;     // infinity for the exact row
  int column = 1;     // 1, 3 or 5
  cplx computed{};
  cplx printed{};
  double deviation = 0.0;  // max componentwise difference
  bool flagged = false;    // deviation > 1e-4
};

std::vector<Table1Cell> table1_cells(int n_trunc = 100);

// Threads allowed by AIRY_SPECTRAL_THREADS and the hardware.
int thread_budget();

// Writes the artifact; returns 0, 2 (validation) or 3 (numerical failure).
int run(const RunConfig& c, std::ostream& err);

// Parses flags (and an optional --config file) and calls run().
int main_cli(int argc, char** argv);

}  // namespace airyspec
