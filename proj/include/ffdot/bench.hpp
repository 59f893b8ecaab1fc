#pragma once

// Benchmark harness behind the ffdot-bench tool, kept as a library so tests
// can drive sweeps without spawning a process. Two experiments:
//
//   dotprod  times the dot-product kernels over the representations that
//            support them and checks every result against the reference
//            modular dot product
//   atomic   times single field operations (add, sub, neg, mul, div, axpy,
//            axpyin) elementwise over arrays
//
// A cell the sweep cannot run for a structural reason (prime out of range
// for the representation, capacity exceeded) is emitted with a
// "skipped(reason)" status; a (kernel, representation) pair that does not
// exist at all is not emitted.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ffdot::bench {

struct Options {
    std::string experiment = "dotprod";       // "dotprod" or "atomic"
    std::vector<std::string> representations; // empty: per-experiment default set
    std::vector<std::string> kernels;         // empty: per-experiment default set
    std::vector<std::uint64_t> primes;        // empty: per-experiment default sweep
    std::size_t dim = 0;                      // 0: 512 for dotprod, 256 for atomic
    std::uint64_t seed = 1;
    double min_cell_ms = 50.0; // repetitions are scaled until a cell runs this long
    std::string out;           // CSV path; empty writes to stdout
    std::string plot_dir;      // per-series "prime mops" files; empty disables
};

struct Row {
    std::string experiment;
    std::string representation;
    std::string kernel;
    std::uint64_t prime = 0;
    std::size_t dim = 0;
    std::uint64_t reps = 0;
    double seconds = 0.0;
    double mops = 0.0;
    std::uint64_t reductions = 0;
    std::uint64_t corrections = 0;
    std::string status; // "ok", "skipped(reason)", "failed(verify)"
};

// named defaults, also useful to tests
std::vector<std::string> default_representations(const std::string& experiment);
std::vector<std::string> default_kernels(const std::string& experiment);
std::vector<std::uint64_t> default_primes(const std::string& experiment);

// either a comma-separated prime list or "min:max:points" for a
// log-spaced sweep snapped to the nearest primes
std::vector<std::uint64_t> parse_primes(const std::string& arg);

std::vector<Row> run(const Options& opts);

// header: experiment,representation,kernel,prime,dim,reps,seconds,mops,reductions,corrections,status
void write_csv(std::ostream& os, const std::vector<Row>& rows);

// one "<experiment>_<kernel>_<representation>.dat" file per series that ran
void write_plots(const std::string& dir, const std::vector<Row>& rows);

// true when no executed cell failed verification
bool all_verified(const std::vector<Row>& rows);

} // namespace ffdot::bench
