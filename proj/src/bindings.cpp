// Python bindings for the dot-product kernels and field representations.
// The vocabulary (kernel and representation names) matches the bench tool,
// so results are comparable across the CLI, the C++ tests, and python.

#include "ffdot/bench.hpp"
#include "ffdot/floatrep.hpp"
#include "ffdot/kernels.hpp"
#include "ffdot/montgomery.hpp"
#include "ffdot/numtheory.hpp"
#include "ffdot/oracle.hpp"
#include "ffdot/zech.hpp"
#include "ffdot/zpz.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

namespace py = pybind11;

namespace {

using ffdot::DotResult;
using ffdot::KernelConfig;

void validate_residues(const std::vector<std::uint64_t>& v, std::uint64_t p) {
    for (const auto e : v)
        if (e >= p)
            throw std::invalid_argument("dot: inputs must be canonical residues in [0, p)");
}

template <class Word>
DotResult run_zpz(const std::string& kernel, std::uint64_t p,
                  const std::vector<std::uint64_t>& xs, const std::vector<std::uint64_t>& ys) {
    ffdot::ZpzField<Word> f(static_cast<Word>(p));
    std::vector<Word> x(xs.begin(), xs.end()), y(ys.begin(), ys.end());
    const std::span<const Word> sx(x), sy(y);
    constexpr unsigned m = 8 * sizeof(Word);
    if (kernel == "naive")
        return dot_naive(f, sx, sy);
    if constexpr (std::is_unsigned_v<Word>) {
        if (kernel == "delayed64")
            return dot_delayed(f, sx, sy);
        if (kernel == "blocked")
            return dot_blocked(f, KernelConfig::blocked(p, m), sx, sy);
        if (kernel == "overflow")
            return dot_overflow(f, KernelConfig::blocked(p, m), sx, sy);
        if (kernel == "hybrid")
            return dot_hybrid(f, KernelConfig::hybrid(p, m), sx, sy);
    }
    throw std::invalid_argument("dot: kernel '" + kernel +
                                "' does not run on this representation");
}

template <class Word>
DotResult run_centered(const std::string& kernel, std::uint64_t p,
                       const std::vector<std::uint64_t>& xs,
                       const std::vector<std::uint64_t>& ys) {
    ffdot::ZpzField<Word> f(static_cast<Word>(p));
    std::vector<Word> x(xs.size()), y(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        x[i] = f.to_centered(static_cast<Word>(xs[i]));
        y[i] = f.to_centered(static_cast<Word>(ys[i]));
    }
    const std::span<const Word> sx(x), sy(y);
    constexpr unsigned m = 8 * sizeof(Word);
    if (kernel == "naive")
        return dot_naive(f, sx, sy);
    if (kernel == "blocked-centered")
        return dot_blocked_centered(f, KernelConfig::blocked_centered(p, m), sx, sy);
    if (kernel == "overflow-centered")
        return dot_overflow_centered(f, KernelConfig::blocked_centered(p, m), sx, sy);
    throw std::invalid_argument("dot: kernel '" + kernel +
                                "' does not run on this representation");
}

template <class Word>
DotResult run_mont(const std::string& kernel, std::uint64_t p,
                   const std::vector<std::uint64_t>& xs, const std::vector<std::uint64_t>& ys) {
    ffdot::MontgomeryField<Word> f(static_cast<Word>(p));
    std::vector<Word> x(xs.size()), y(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        x[i] = f.to_mont(static_cast<Word>(xs[i]));
        y[i] = f.to_mont(static_cast<Word>(ys[i]));
    }
    const std::span<const Word> sx(x), sy(y);
    if (kernel == "naive")
        return dot_naive(f, sx, sy);
    if (kernel == "montgomery-blocked")
        return dot_montgomery_blocked(
            f, KernelConfig::montgomery_blocked(p, ffdot::MontgomeryField<Word>::shift), sx, sy);
    throw std::invalid_argument("dot: kernel '" + kernel +
                                "' does not run on this representation");
}

DotResult run_float(const std::string& kernel, std::uint64_t p,
                    const std::vector<std::uint64_t>& xs, const std::vector<std::uint64_t>& ys) {
    ffdot::FloatField f(p);
    std::vector<double> x(xs.begin(), xs.end()), y(ys.begin(), ys.end());
    const std::span<const double> sx(x), sy(y);
    if (kernel == "naive")
        return dot_naive(f, sx, sy);
    if (kernel == "delayed53")
        return dot_delayed(f, sx, sy);
    throw std::invalid_argument("dot: kernel '" + kernel +
                                "' does not run on this representation");
}

std::string pick_representation(const std::string& kernel, std::uint64_t p) {
    if (kernel == "delayed64")
        return "zpz64u";
    if (kernel == "delayed53")
        return "float53";
    if (kernel == "blocked-centered" || kernel == "overflow-centered")
        return p <= ffdot::ZpzField32::max_prime() ? "centered32" : "centered64";
    if (kernel == "montgomery-blocked")
        return p <= ffdot::MontgomeryField16::max_prime() ? "mont16" : "mont32";
    return p <= ffdot::ZpzField32u::max_prime() ? "zpz32u" : "zpz64u";
}

DotResult dot(const std::vector<std::uint64_t>& xs, const std::vector<std::uint64_t>& ys,
              std::uint64_t p, const std::string& kernel, const std::string& representation) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("dot: input lengths differ");
    if (p < 2)
        throw std::domain_error("dot: p must be at least 2");
    validate_residues(xs, p);
    validate_residues(ys, p);
    const std::string rep = representation == "auto" ? pick_representation(kernel, p)
                                                     : representation;
    if (rep == "zpz32")
        return run_zpz<std::int32_t>(kernel, p, xs, ys);
    if (rep == "zpz32u")
        return run_zpz<std::uint32_t>(kernel, p, xs, ys);
    if (rep == "zpz64")
        return run_zpz<std::int64_t>(kernel, p, xs, ys);
    if (rep == "zpz64u")
        return run_zpz<std::uint64_t>(kernel, p, xs, ys);
    if (rep == "centered32")
        return run_centered<std::int32_t>(kernel, p, xs, ys);
    if (rep == "centered64")
        return run_centered<std::int64_t>(kernel, p, xs, ys);
    if (rep == "mont16")
        return run_mont<std::uint32_t>(kernel, p, xs, ys);
    if (rep == "mont32")
        return run_mont<std::uint64_t>(kernel, p, xs, ys);
    if (rep == "float53")
        return run_float(kernel, p, xs, ys);
    throw std::invalid_argument("dot: unknown representation '" + rep + "'");
}

std::uint64_t oracle_dot(const std::vector<std::uint64_t>& xs,
                         const std::vector<std::uint64_t>& ys, std::uint64_t p) {
    return ffdot::oracle::dot(xs, ys, p);
}

} // namespace

PYBIND11_MODULE(_ffdot, mod) {
    mod.doc() = "Exact dot products over word-size prime fields, with reduction and "
                "correction counts, plus logarithm-table field arithmetic";

    py::class_<DotResult>(mod, "DotResult")
        .def_readonly("value", &DotResult::value)
        .def_readonly("reductions", &DotResult::reductions)
        .def_readonly("corrections", &DotResult::corrections)
        .def("__repr__", [](const DotResult& r) {
            return "DotResult(value=" + std::to_string(r.value) +
                   ", reductions=" + std::to_string(r.reductions) +
                   ", corrections=" + std::to_string(r.corrections) + ")";
        });

    py::class_<KernelConfig>(mod, "KernelConfig")
        .def_readonly("p", &KernelConfig::p)
        .def_readonly("m", &KernelConfig::m)
        .def_readonly("block", &KernelConfig::block)
        .def_readonly("lambda_max", &KernelConfig::lambda_max)
        .def_readonly("corr", &KernelConfig::corr)
        .def_static("blocked", &KernelConfig::blocked, py::arg("p"), py::arg("m"))
        .def_static("blocked_centered", &KernelConfig::blocked_centered, py::arg("p"),
                    py::arg("m"))
        .def_static("hybrid", &KernelConfig::hybrid, py::arg("p"), py::arg("m"))
        .def_static("montgomery_blocked", &KernelConfig::montgomery_blocked, py::arg("p"),
                    py::arg("radix_log2"))
        .def("__repr__", [](const KernelConfig& c) {
            return "KernelConfig(p=" + std::to_string(c.p) + ", m=" + std::to_string(c.m) +
                   ", block=" + std::to_string(c.block) +
                   ", lambda_max=" + std::to_string(c.lambda_max) +
                   ", corr=" + std::to_string(c.corr) + ")";
        });

    mod.def("dot", &dot, py::arg("x"), py::arg("y"), py::arg("p"), py::arg("kernel") = "naive",
            py::arg("representation") = "auto",
            "Exact dot product of two canonical-residue vectors mod p. Returns a DotResult "
            "with the residue and the kernel's reduction/correction counts. representation "
            "'auto' picks the narrowest word that hosts p for the given kernel.");
    mod.def("oracle_dot", &oracle_dot, py::arg("x"), py::arg("y"), py::arg("p"),
            "Reference dot product via 128-bit accumulation, for cross-checking.");

    mod.def("kernels", [] { return ffdot::bench::default_kernels("dotprod"); },
            "Kernel names accepted by dot() and the bench tool.");
    mod.def("representations", [] { return ffdot::bench::default_representations("dotprod"); },
            "Representation names accepted by dot() and the bench tool.");

    mod.def("is_prime", &ffdot::is_prime, py::arg("n"));
    mod.def("next_prime", &ffdot::next_prime, py::arg("n"),
            "Smallest prime greater than or equal to n.");
    mod.def("inv_mod", &ffdot::inv_mod, py::arg("a"), py::arg("m"),
            "Modular inverse of a mod m; raises ValueError if not invertible.");

    py::class_<ffdot::ZechField>(mod, "ZechField")
        .def(py::init<std::uint64_t, unsigned, std::size_t>(), py::arg("p"), py::arg("d") = 1,
             py::arg("table_budget") = ffdot::ZechField::default_table_budget,
             "GF(p^d) with logarithm-table arithmetic; elements are integer codes.")
        .def_property_readonly("p", &ffdot::ZechField::p)
        .def_property_readonly("d", &ffdot::ZechField::d)
        .def_property_readonly("q", &ffdot::ZechField::q)
        .def("encode", &ffdot::ZechField::encode, py::arg("elem"))
        .def("decode", &ffdot::ZechField::decode, py::arg("code"))
        .def("add", &ffdot::ZechField::add, py::arg("a"), py::arg("b"))
        .def("sub", &ffdot::ZechField::sub, py::arg("a"), py::arg("b"))
        .def("mul", &ffdot::ZechField::mul, py::arg("a"), py::arg("b"))
        .def("div", &ffdot::ZechField::div, py::arg("a"), py::arg("b"))
        .def("neg", &ffdot::ZechField::neg, py::arg("a"))
        .def("axpy", &ffdot::ZechField::axpy, py::arg("a"), py::arg("x"), py::arg("y"))
        .def("axpyin", &ffdot::ZechField::axpyin, py::arg("r"), py::arg("a"), py::arg("x"))
        .def("__repr__", [](const ffdot::ZechField& z) {
            return "ZechField(p=" + std::to_string(z.p()) + ", d=" + std::to_string(z.d()) +
                   ")";
        });
}
