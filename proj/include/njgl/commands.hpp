#pragma once

#include "njgl/admm.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace njgl {

/// Process exit codes.
enum ExitCode : int { kExitOk = 0, kExitNotConverged = 1, kExitUsage = 2 };

struct SimulateArgs {
    std::string network = "erdos";
    std::size_t p = 100;
    std::size_t n = 50;
    std::uint64_t seed = 1;
    std::size_t n_perturbed = 2;
    std::size_t n_cohub = 2;
    std::string out;
};

struct FitArgs {
    std::string method;
    std::string q = "2";
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::vector<std::string> cov;
    std::vector<double> n;
    std::vector<std::string> raw;  ///< replaces cov/n: covariances from centered samples
    bool screen = false;
    AdmmOptions admm;
    std::string out;
};

struct ScreenArgs {
    std::string method;
    std::string q = "2";
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::vector<std::string> cov;
    std::vector<double> n;
    std::string out;  ///< optional report file; the report always goes to stdout
};

struct MetricsArgs {
    std::string truth;
    std::string fit;
    double t0 = 1e-6;
    double ts_multiplier = 5.5;
    std::string out;  ///< optional directory for metrics.json and metrics.csv
};

struct CvArgs {
    std::vector<std::string> raw;
    std::string method;
    std::string q = "2";
    std::string grid;
    std::size_t folds = 5;
    std::uint64_t seed = 1;
    AdmmOptions admm;
    std::string out;  ///< CSV path; stdout when empty
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);
int cmd_fit(const FitArgs& args, std::ostream& out, std::ostream& err);
int cmd_screen(const ScreenArgs& args, std::ostream& out, std::ostream& err);
int cmd_metrics(const MetricsArgs& args, std::ostream& out, std::ostream& err);
int cmd_cv(const CvArgs& args, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to one command. Usage errors print the help text and
/// return kExitUsage.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace njgl
