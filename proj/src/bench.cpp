#include "ffdot/bench.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string_view>
#include <utility>

#include "ffdot/kernels.hpp"
#include "ffdot/numtheory.hpp"
#include "ffdot/oracle.hpp"
#include "ffdot/zech.hpp"

namespace ffdot::bench {

namespace {

template <class T>
void do_not_optimize(T const& value) {
    asm volatile("" : : "r,m"(value) : "memory");
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// deterministic per-cell stream: same options, same data, run after run
std::uint64_t cell_seed(std::uint64_t seed, const Row& row, const char* stream) {
    const std::string key = row.experiment + "|" + row.kernel + "|" + row.representation + "|" +
                            std::to_string(row.prime) + "|" + std::to_string(row.dim) + "|" +
                            stream;
    return splitmix(fnv1a(key) ^ splitmix(seed));
}

std::vector<std::uint64_t> gen_residues(std::uint64_t seed, std::size_t n, std::uint64_t lo,
                                        std::uint64_t hi) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> dist(lo, hi);
    std::vector<std::uint64_t> v(n);
    for (auto& x : v)
        x = dist(rng);
    return v;
}

// scale repetitions until one cell runs min_cell_ms, then report the median
// of five cells at that repetition count
template <class Body>
std::pair<std::uint64_t, double> time_cell(Body&& body, double min_cell_ms) {
    using clock = std::chrono::steady_clock;
    auto run_reps = [&](std::uint64_t reps) {
        const auto t0 = clock::now();
        for (std::uint64_t r = 0; r < reps; ++r)
            body();
        return std::chrono::duration<double>(clock::now() - t0).count();
    };
    std::uint64_t reps = 1;
    double t = run_reps(reps);
    while (t * 1e3 < min_cell_ms && reps < (std::uint64_t(1) << 30)) {
        reps *= 2;
        t = run_reps(reps);
    }
    std::array<double, 5> cells{};
    for (auto& c : cells)
        c = run_reps(reps);
    std::sort(cells.begin(), cells.end());
    return {reps, cells[2]};
}

Row base_row(const Options& o, const std::string& kernel, const std::string& rep,
             std::uint64_t p, std::size_t dim) {
    Row r;
    r.experiment = o.experiment;
    r.representation = rep;
    r.kernel = kernel;
    r.prime = p;
    r.dim = dim;
    r.status = "ok";
    return r;
}

Row skip_row(Row row, const char* why) {
    row.status = std::string("skipped(") + why + ")";
    return row;
}

template <class Word>
std::vector<Word> as_words(const std::vector<std::uint64_t>& v) {
    std::vector<Word> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        w[i] = static_cast<Word>(v[i]);
    return w;
}

// ---- dotprod cells ----------------------------------------------------

template <class Run>
Row finish_dot(Row row, std::uint64_t expect, Run&& run, double min_cell_ms) {
    const DotResult first = run();
    row.reductions = first.reductions;
    row.corrections = first.corrections;
    auto [reps, secs] = time_cell([&] { do_not_optimize(run().value); }, min_cell_ms);
    row.reps = reps;
    row.seconds = secs;
    row.mops = secs > 0 ? 2.0 * double(row.dim) * double(reps) / (secs * 1e6) : 0.0;
    if (first.value != expect)
        row.status = "failed(verify)";
    return row;
}

struct CellInputs {
    std::vector<std::uint64_t> xs, ys;
    std::uint64_t expect = 0;
};

CellInputs gen_inputs(const Options& o, const Row& row, std::uint64_t p, std::size_t dim) {
    CellInputs in;
    in.xs = gen_residues(cell_seed(o.seed, row, "x"), dim, 0, p - 1);
    in.ys = gen_residues(cell_seed(o.seed, row, "y"), dim, 0, p - 1);
    in.expect = oracle::dot(in.xs, in.ys, p);
    return in;
}

template <class Word>
bool zpz_in_range(std::uint64_t p) {
    return u128(p) * (p - 1) < (u128(1) << std::numeric_limits<Word>::digits);
}

template <class Word>
bool mont_in_range(std::uint64_t p) {
    const u128 radix = u128(1) << MontgomeryField<Word>::shift;
    return u128(p - 1) * (p - 1) + u128(p) * (radix - 1) < radix * radix;
}

// Make receives the field plus coded spans and returns the () -> DotResult
// closure the timing loop calls.
template <class Word, class Make>
Row run_zpz(Row row, std::uint64_t p, std::size_t dim, const Options& o, Make&& make) {
    if (!zpz_in_range<Word>(p))
        return skip_row(std::move(row), "prime-out-of-range");
    const ZpzField<Word> f(p);
    const CellInputs in = gen_inputs(o, row, p, dim);
    const auto x = as_words<Word>(in.xs);
    const auto y = as_words<Word>(in.ys);
    auto run = make(f, std::span<const Word>(x), std::span<const Word>(y));
    return finish_dot(std::move(row), in.expect, run, o.min_cell_ms);
}

template <class Word, class Make>
Row run_centered(Row row, std::uint64_t p, std::size_t dim, const Options& o, Make&& make) {
    static_assert(std::is_signed_v<Word>);
    if (p == 2)
        return skip_row(std::move(row), "needs-odd-p");
    if (!zpz_in_range<Word>(p))
        return skip_row(std::move(row), "prime-out-of-range");
    const ZpzField<Word> f(p);
    const CellInputs in = gen_inputs(o, row, p, dim);
    std::vector<Word> x(dim), y(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        x[i] = f.to_centered(static_cast<Word>(in.xs[i]));
        y[i] = f.to_centered(static_cast<Word>(in.ys[i]));
    }
    auto run = make(f, std::span<const Word>(x), std::span<const Word>(y));
    return finish_dot(std::move(row), in.expect, run, o.min_cell_ms);
}

template <class Word, class Make>
Row run_mont(Row row, std::uint64_t p, std::size_t dim, const Options& o, Make&& make) {
    if (p % 2 == 0)
        return skip_row(std::move(row), "needs-odd-p");
    if (!mont_in_range<Word>(p))
        return skip_row(std::move(row), "prime-out-of-range");
    const MontgomeryField<Word> f(p);
    const CellInputs in = gen_inputs(o, row, p, dim);
    std::vector<Word> x(dim), y(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        x[i] = f.to_mont(static_cast<Word>(in.xs[i]));
        y[i] = f.to_mont(static_cast<Word>(in.ys[i]));
    }
    auto run = make(f, std::span<const Word>(x), std::span<const Word>(y));
    return finish_dot(std::move(row), in.expect, run, o.min_cell_ms);
}

template <class Make>
Row run_float(Row row, std::uint64_t p, std::size_t dim, const Options& o, Make&& make) {
    if (u128(p) * (p - 1) >= (u128(1) << 53))
        return skip_row(std::move(row), "prime-out-of-range");
    const FloatField f(p);
    const CellInputs in = gen_inputs(o, row, p, dim);
    std::vector<double> x(dim), y(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        x[i] = f.from_u64(in.xs[i]);
        y[i] = f.from_u64(in.ys[i]);
    }
    auto run = make(f, std::span<const double>(x), std::span<const double>(y));
    return finish_dot(std::move(row), in.expect, run, o.min_cell_ms);
}

std::optional<Row> dotprod_cell(const std::string& kernel, const std::string& rep,
                                std::uint64_t p, std::size_t dim, const Options& o) {
    Row row = base_row(o, kernel, rep, p, dim);

    if (kernel == "naive") {
        auto plain = [](const auto& f, auto x, auto y) {
            return [&f, x, y] { return dot_naive(f, x, y); };
        };
        if (rep == "zpz32")
            return run_zpz<std::int32_t>(std::move(row), p, dim, o, plain);
        if (rep == "zpz32u")
            return run_zpz<std::uint32_t>(std::move(row), p, dim, o, plain);
        if (rep == "zpz64")
            return run_zpz<std::int64_t>(std::move(row), p, dim, o, plain);
        if (rep == "zpz64u")
            return run_zpz<std::uint64_t>(std::move(row), p, dim, o, plain);
        if (rep == "float53")
            return run_float(std::move(row), p, dim, o, plain);
        if (rep == "mont16")
            return run_mont<std::uint32_t>(std::move(row), p, dim, o, plain);
        if (rep == "mont32")
            return run_mont<std::uint64_t>(std::move(row), p, dim, o, plain);
        return std::nullopt;
    }

    if (kernel == "delayed64") {
        if (rep != "zpz64u")
            return std::nullopt;
        if (u128(dim) * (u128(p - 1) * (p - 1)) > (u128(1) << 64) - 1)
            return skip_row(std::move(row), "dim-exceeds-capacity");
        return run_zpz<std::uint64_t>(std::move(row), p, dim, o,
                                      [](const auto& f, auto x, auto y) {
                                          return [&f, x, y] { return dot_delayed(f, x, y); };
                                      });
    }

    if (kernel == "delayed53") {
        if (rep != "float53")
            return std::nullopt;
        if (u128(dim) * (u128(p - 1) * (p - 1)) >= (u128(1) << 53))
            return skip_row(std::move(row), "dim-exceeds-capacity");
        return run_float(std::move(row), p, dim, o, [](const auto& f, auto x, auto y) {
            return [&f, x, y] { return dot_delayed(f, x, y); };
        });
    }

    if (kernel == "blocked") {
        auto cfg_run = [](const auto& f, auto x, auto y) {
            using Word = typename std::remove_cvref_t<decltype(f)>::word_type;
            return [&f, x, y, cfg = KernelConfig::blocked(f.p(), 8 * sizeof(Word))] {
                return dot_blocked(f, cfg, x, y);
            };
        };
        if (rep == "zpz32u")
            return run_zpz<std::uint32_t>(std::move(row), p, dim, o, cfg_run);
        if (rep == "zpz64u")
            return run_zpz<std::uint64_t>(std::move(row), p, dim, o, cfg_run);
        return std::nullopt;
    }

    if (kernel == "blocked-centered") {
        auto cfg_run = [](const auto& f, auto x, auto y) {
            using Word = typename std::remove_cvref_t<decltype(f)>::word_type;
            return [&f, x, y,
                    cfg = KernelConfig::blocked_centered(std::uint64_t(f.p()), 8 * sizeof(Word))] {
                return dot_blocked_centered(f, cfg, x, y);
            };
        };
        if (rep == "centered32")
            return run_centered<std::int32_t>(std::move(row), p, dim, o, cfg_run);
        if (rep == "centered64")
            return run_centered<std::int64_t>(std::move(row), p, dim, o, cfg_run);
        return std::nullopt;
    }

    if (kernel == "overflow") {
        auto cfg_run = [](const auto& f, auto x, auto y) {
            using Word = typename std::remove_cvref_t<decltype(f)>::word_type;
            return [&f, x, y, cfg = KernelConfig::blocked(f.p(), 8 * sizeof(Word))] {
                return dot_overflow(f, cfg, x, y);
            };
        };
        if (rep == "zpz32u")
            return run_zpz<std::uint32_t>(std::move(row), p, dim, o, cfg_run);
        if (rep == "zpz64u")
            return run_zpz<std::uint64_t>(std::move(row), p, dim, o, cfg_run);
        return std::nullopt;
    }

    if (kernel == "overflow-centered") {
        auto cfg_run = [](const auto& f, auto x, auto y) {
            using Word = typename std::remove_cvref_t<decltype(f)>::word_type;
            return [&f, x, y,
                    cfg = KernelConfig::blocked_centered(std::uint64_t(f.p()), 8 * sizeof(Word))] {
                return dot_overflow_centered(f, cfg, x, y);
            };
        };
        if (rep == "centered32")
            return run_centered<std::int32_t>(std::move(row), p, dim, o, cfg_run);
        if (rep == "centered64")
            return run_centered<std::int64_t>(std::move(row), p, dim, o, cfg_run);
        return std::nullopt;
    }

    if (kernel == "hybrid") {
        auto cfg_run = [](const auto& f, auto x, auto y) {
            using Word = typename std::remove_cvref_t<decltype(f)>::word_type;
            return [&f, x, y, cfg = KernelConfig::hybrid(f.p(), 8 * sizeof(Word))] {
                return dot_hybrid(f, cfg, x, y);
            };
        };
        if (rep == "zpz32u")
            return run_zpz<std::uint32_t>(std::move(row), p, dim, o, cfg_run);
        if (rep == "zpz64u")
            return run_zpz<std::uint64_t>(std::move(row), p, dim, o, cfg_run);
        return std::nullopt;
    }

    if (kernel == "montgomery-blocked") {
        auto cfg_run = [](const auto& f, auto x, auto y) {
            using F = std::remove_cvref_t<decltype(f)>;
            return [&f, x, y,
                    cfg = KernelConfig::montgomery_blocked(std::uint64_t(f.p()), F::shift)] {
                return dot_montgomery_blocked(f, cfg, x, y);
            };
        };
        if (rep == "mont16")
            return run_mont<std::uint32_t>(std::move(row), p, dim, o, cfg_run);
        if (rep == "mont32")
            return run_mont<std::uint64_t>(std::move(row), p, dim, o, cfg_run);
        return std::nullopt;
    }

    return std::nullopt;
}

// ---- atomic cells ------------------------------------------------------

// the do-nothing-clever baseline: full-width remainder after every step
struct RawModField {
    std::uint64_t p_;
    explicit RawModField(std::uint64_t p) : p_(p) {}
    std::uint64_t p() const { return p_; }
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % p_; }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + p_ - b) % p_; }
    std::uint64_t neg(std::uint64_t a) const { return (p_ - a) % p_; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return static_cast<std::uint64_t>(u128(a) * b % p_);
    }
    std::uint64_t div(std::uint64_t a, std::uint64_t b) const { return mul(a, inv_mod(b, p_)); }
    std::uint64_t axpy(std::uint64_t a, std::uint64_t x, std::uint64_t y) const {
        return static_cast<std::uint64_t>((u128(a) * x + y) % p_);
    }
    std::uint64_t axpyin(std::uint64_t r, std::uint64_t a, std::uint64_t x) const {
        return axpy(a, x, r);
    }
};

std::uint64_t ref_op(const std::string& op, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                     std::uint64_t p) {
    if (op == "add")
        return (a + b) % p;
    if (op == "sub")
        return (a + p - b) % p;
    if (op == "neg")
        return (p - a) % p;
    if (op == "mul")
        return static_cast<std::uint64_t>(u128(a) * b % p);
    if (op == "div")
        return static_cast<std::uint64_t>(u128(a) * inv_mod(b, p) % p);
    return static_cast<std::uint64_t>((u128(a) * b + c) % p); // axpy, axpyin
}

template <class Field, class Elem>
std::function<void()> atomic_body(const std::string& op, const Field& f,
                                  const std::vector<Elem>& a, const std::vector<Elem>& b,
                                  const std::vector<Elem>& c, std::vector<Elem>& r) {
    const std::size_t n = a.size();
    if (op == "add")
        return [&f, &a, &b, &r, n] {
            for (std::size_t i = 0; i < n; ++i)
                r[i] = f.add(a[i], b[i]);
            do_not_optimize(r.data());
        };
    if (op == "sub")
        return [&f, &a, &b, &r, n] {
            for (std::size_t i = 0; i < n; ++i)
                r[i] = f.sub(a[i], b[i]);
            do_not_optimize(r.data());
        };
    if (op == "neg")
        return [&f, &a, &r, n] {
            for (std::size_t i = 0; i < n; ++i)
                r[i] = f.neg(a[i]);
            do_not_optimize(r.data());
        };
    if (op == "mul")
        return [&f, &a, &b, &r, n] {
            for (std::size_t i = 0; i < n; ++i)
                r[i] = f.mul(a[i], b[i]);
            do_not_optimize(r.data());
        };
    if (op == "div")
        return [&f, &a, &b, &r, n] {
            for (std::size_t i = 0; i < n; ++i)
                r[i] = f.div(a[i], b[i]);
            do_not_optimize(r.data());
        };
    if (op == "axpy")
        return [&f, &a, &b, &c, &r, n] {
            for (std::size_t i = 0; i < n; ++i)
                r[i] = f.axpy(a[i], b[i], c[i]);
            do_not_optimize(r.data());
        };
    return [&f, &a, &b, &r, n] { // axpyin: results feed back, staying in the field
        for (std::size_t i = 0; i < n; ++i)
            r[i] = f.axpyin(r[i], a[i], b[i]);
        do_not_optimize(r.data());
    };
}

template <class Field, class Elem, class Enc, class Dec>
Row atomic_run(Row row, const std::string& op, const Field& f, std::uint64_t p, std::size_t dim,
               const Options& o, Enc&& enc, Dec&& dec) {
    const auto ua = gen_residues(cell_seed(o.seed, row, "a"), dim, 0, p - 1);
    const auto ub = gen_residues(cell_seed(o.seed, row, "b"), dim, op == "div" ? 1 : 0, p - 1);
    const auto uc = gen_residues(cell_seed(o.seed, row, "c"), dim, 0, p - 1);
    std::vector<Elem> a(dim), b(dim), c(dim), r(dim, Elem{});
    for (std::size_t i = 0; i < dim; ++i) {
        a[i] = enc(ua[i]);
        b[i] = enc(ub[i]);
        c[i] = enc(uc[i]);
    }
    if (op == "axpyin")
        r = c;

    auto body = atomic_body(op, f, a, b, c, r);
    auto [reps, secs] = time_cell(body, o.min_cell_ms);

    // one fresh application per element, checked against plain remainders
    bool ok = true;
    for (std::size_t i = 0; i < dim && ok; ++i) {
        std::uint64_t got;
        if (op == "add")
            got = dec(f.add(a[i], b[i]));
        else if (op == "sub")
            got = dec(f.sub(a[i], b[i]));
        else if (op == "neg")
            got = dec(f.neg(a[i]));
        else if (op == "mul")
            got = dec(f.mul(a[i], b[i]));
        else if (op == "div")
            got = dec(f.div(a[i], b[i]));
        else if (op == "axpy")
            got = dec(f.axpy(a[i], b[i], c[i]));
        else
            got = dec(f.axpyin(c[i], a[i], b[i]));
        ok = got == ref_op(op, ua[i], ub[i], uc[i], p);
    }

    row.reps = reps;
    row.seconds = secs;
    row.mops = secs > 0 ? double(dim) * double(reps) / (secs * 1e6) : 0.0;
    if (!ok)
        row.status = "failed(verify)";
    return row;
}

bool known_atomic_op(const std::string& op) {
    static const std::array<const char*, 7> ops{"add", "sub", "neg", "mul", "div", "axpy",
                                                "axpyin"};
    return std::find(ops.begin(), ops.end(), op) != ops.end();
}

std::optional<Row> atomic_cell(const std::string& op, const std::string& rep, std::uint64_t p,
                               std::size_t dim, const Options& o) {
    if (!known_atomic_op(op))
        return std::nullopt;
    Row row = base_row(o, op, rep, p, dim);

    if (rep == "centered32" || rep == "centered64")
        return skip_row(std::move(row), "no-atomic-op-set");

    if (rep == "zpz32" || rep == "zpz32u" || rep == "zpz64" || rep == "zpz64u") {
        auto run = [&](auto word_tag) -> Row {
            using Word = typename decltype(word_tag)::type;
            if (!zpz_in_range<Word>(p))
                return skip_row(std::move(row), "prime-out-of-range");
            const ZpzField<Word> f(p);
            return atomic_run<ZpzField<Word>, Word>(
                std::move(row), op, f, p, dim, o,
                [](std::uint64_t v) { return static_cast<Word>(v); },
                [](Word v) { return static_cast<std::uint64_t>(v); });
        };
        if (rep == "zpz32")
            return run(std::type_identity<std::int32_t>{});
        if (rep == "zpz32u")
            return run(std::type_identity<std::uint32_t>{});
        if (rep == "zpz64")
            return run(std::type_identity<std::int64_t>{});
        return run(std::type_identity<std::uint64_t>{});
    }

    if (rep == "mont16" || rep == "mont32") {
        auto run = [&](auto word_tag) -> Row {
            using Word = typename decltype(word_tag)::type;
            if (p % 2 == 0)
                return skip_row(std::move(row), "needs-odd-p");
            if (!mont_in_range<Word>(p))
                return skip_row(std::move(row), "prime-out-of-range");
            const MontgomeryField<Word> f(p);
            return atomic_run<MontgomeryField<Word>, Word>(
                std::move(row), op, f, p, dim, o,
                [&f](std::uint64_t v) { return f.to_mont(static_cast<Word>(v)); },
                [&f](Word v) { return static_cast<std::uint64_t>(f.from_mont(v)); });
        };
        if (rep == "mont16")
            return run(std::type_identity<std::uint32_t>{});
        return run(std::type_identity<std::uint64_t>{});
    }

    if (rep == "float53") {
        if (u128(p) * (p - 1) >= (u128(1) << 53))
            return skip_row(std::move(row), "prime-out-of-range");
        const FloatField f(p);
        return atomic_run<FloatField, double>(
            std::move(row), op, f, p, dim, o,
            [&f](std::uint64_t v) { return f.from_u64(v); },
            [&f](double v) { return f.to_u64(v); });
    }

    if (rep == "zech") {
        try {
            const ZechField z(p);
            return atomic_run<ZechField, zech_code>(
                Row(row), op, z, p, dim, o, [&z](std::uint64_t v) { return z.encode(v); },
                [&z](zech_code c) { return z.decode(c); });
        } catch (const std::domain_error&) {
            return skip_row(std::move(row), "prime-out-of-range");
        } catch (const std::length_error&) {
            return skip_row(std::move(row), "table-budget");
        }
    }

    if (rep == "rawmod") {
        const RawModField f(p);
        return atomic_run<RawModField, std::uint64_t>(
            std::move(row), op, f, p, dim, o, [](std::uint64_t v) { return v; },
            [](std::uint64_t v) { return v; });
    }

    return std::nullopt;
}

// ---- prime sweeps -------------------------------------------------------

std::uint64_t nearest_prime(double v) {
    if (v <= 2.0)
        return 2;
    const auto n = static_cast<std::uint64_t>(std::llround(v));
    const std::uint64_t lo = is_prime(n) ? n : prev_prime(n);
    const std::uint64_t hi = next_prime(n);
    return (n - lo <= hi - n) ? lo : hi;
}

std::vector<std::uint64_t> log_sampled_primes(std::uint64_t lo, std::uint64_t hi,
                                              std::size_t points) {
    if (lo < 2 || hi < lo || points == 0)
        throw std::invalid_argument("prime sweep: need 2 <= min <= max and points >= 1");
    std::vector<std::uint64_t> out;
    const double llo = std::log(double(lo));
    const double lhi = std::log(double(hi));
    for (std::size_t i = 0; i < points; ++i) {
        const double t = points == 1 ? 0.0 : double(i) / double(points - 1);
        out.push_back(nearest_prime(std::exp(llo + t * (lhi - llo))));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace

std::vector<std::string> default_representations(const std::string& experiment) {
    if (experiment == "atomic")
        return {"zpz32", "zpz32u", "zpz64", "zpz64u", "mont16",
                "mont32", "float53", "zech",  "rawmod"};
    return {"zpz32",      "zpz32u",     "zpz64",   "zpz64u", "centered32",
            "centered64", "float53",    "mont16",  "mont32"};
}

std::vector<std::string> default_kernels(const std::string& experiment) {
    if (experiment == "atomic")
        return {"add", "sub", "neg", "mul", "div", "axpy", "axpyin"};
    return {"naive",    "delayed64",         "delayed53", "blocked", "blocked-centered",
            "overflow", "overflow-centered", "hybrid",    "montgomery-blocked"};
}

std::vector<std::uint64_t> default_primes(const std::string& experiment) {
    if (experiment == "atomic")
        return {32749};
    auto primes = log_sampled_primes(3, 65521, 64);
    // landmarks: the 32-bit hybrid capacity step at 2897, the largest 15-bit
    // prime, and each representation's largest admissible prime
    for (std::uint64_t p : {2897ull, 32749ull, 40009ull, 40499ull, 46337ull, 65521ull})
        primes.push_back(p);
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    return primes;
}

std::vector<std::uint64_t> parse_primes(const std::string& arg) {
    std::vector<std::uint64_t> out;
    if (arg.find(':') != std::string::npos) {
        std::uint64_t lo = 0, hi = 0;
        std::size_t points = 0;
        char extra = 0;
        if (std::sscanf(arg.c_str(), "%lu:%lu:%zu%c", &lo, &hi, &points, &extra) != 3)
            throw std::invalid_argument("--primes: expected min:max:points, got " + arg);
        return log_sampled_primes(lo, hi, points);
    }
    std::size_t pos = 0;
    while (pos < arg.size()) {
        const std::size_t comma = arg.find(',', pos);
        const std::string tok = arg.substr(pos, comma == std::string::npos ? comma : comma - pos);
        std::size_t used = 0;
        const std::uint64_t p = std::stoull(tok, &used);
        if (used != tok.size())
            throw std::invalid_argument("--primes: bad number " + tok);
        if (!is_prime(p))
            throw std::invalid_argument("--primes: " + tok + " is not prime");
        out.push_back(p);
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    if (out.empty())
        throw std::invalid_argument("--primes: empty list");
    return out;
}

std::vector<Row> run(const Options& opts) {
    Options o = opts;
    if (o.experiment != "dotprod" && o.experiment != "atomic")
        throw std::invalid_argument("unknown experiment: " + o.experiment);
    if (o.representations.empty())
        o.representations = default_representations(o.experiment);
    if (o.kernels.empty())
        o.kernels = default_kernels(o.experiment);
    if (o.primes.empty())
        o.primes = default_primes(o.experiment);
    if (o.dim == 0)
        o.dim = o.experiment == "atomic" ? 256 : 512;
    for (std::uint64_t p : o.primes)
        if (!is_prime(p))
            throw std::invalid_argument("primes must be prime, got " + std::to_string(p));

    std::vector<Row> rows;
    for (std::uint64_t p : o.primes)
        for (const auto& kernel : o.kernels)
            for (const auto& rep : o.representations) {
                auto cell = o.experiment == "atomic" ? atomic_cell(kernel, rep, p, o.dim, o)
                                                     : dotprod_cell(kernel, rep, p, o.dim, o);
                if (cell)
                    rows.push_back(std::move(*cell));
            }
    return rows;
}

void write_csv(std::ostream& os, const std::vector<Row>& rows) {
    os << "experiment,representation,kernel,prime,dim,reps,seconds,mops,reductions,"
          "corrections,status\n";
    char buf[64];
    for (const auto& r : rows) {
        os << r.experiment << ',' << r.representation << ',' << r.kernel << ',' << r.prime << ','
           << r.dim << ',' << r.reps << ',';
        std::snprintf(buf, sizeof buf, "%.9g", r.seconds);
        os << buf << ',';
        std::snprintf(buf, sizeof buf, "%.6g", r.mops);
        os << buf << ',' << r.reductions << ',' << r.corrections << ',' << r.status << '\n';
    }
}

void write_plots(const std::string& dir, const std::vector<Row>& rows) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    struct Series {
        std::string experiment;
        std::vector<std::pair<std::uint64_t, double>> points;
    };
    std::map<std::pair<std::string, std::string>, Series> series;
    for (const auto& r : rows) {
        if (r.status != "ok")
            continue;
        auto& s = series[{r.kernel, r.representation}];
        s.experiment = r.experiment;
        s.points.emplace_back(r.prime, r.mops);
    }
    for (auto& [key, s] : series) {
        std::sort(s.points.begin(), s.points.end());
        const fs::path path =
            fs::path(dir) / (s.experiment + "_" + key.first + "_" + key.second + ".dat");
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot write plot file " + path.string());
        out << "# prime mops\n";
        char buf[64];
        for (const auto& [p, mops] : s.points) {
            std::snprintf(buf, sizeof buf, "%.6g", mops);
            out << p << ' ' << buf << '\n';
        }
    }
}

bool all_verified(const std::vector<Row>& rows) {
    for (const auto& r : rows)
        if (r.status.rfind("failed", 0) == 0)
            return false;
    return true;
}

} // namespace ffdot::bench
