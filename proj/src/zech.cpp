#include "ffdot/zech.hpp"

#include <cstring>
#include <fstream>
#include <utility>

#include "ffdot/numtheory.hpp"

namespace ffdot {

namespace {

// Construction-time polynomial kit over F_p. Coefficients low degree first,
// trailing zeros trimmed. Only table building ever runs this; the field
// operations themselves never see a polynomial.

using Poly = std::vector<std::uint32_t>;

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0)
        a.pop_back();
}

Poly unpack(std::uint64_t v, unsigned d, std::uint64_t p) {
    Poly c(d);
    for (unsigned i = 0; i < d; ++i) {
        c[i] = static_cast<std::uint32_t>(v % p);
        v /= p;
    }
    return c;
}

std::uint64_t pack(const Poly& a, std::uint64_t p) {
    std::uint64_t v = 0;
    for (std::size_t i = a.size(); i-- > 0;)
        v = v * p + a[i];
    return v;
}

Poly poly_mul(const Poly& a, const Poly& b, std::uint64_t p) {
    if (a.empty() || b.empty())
        return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t(a[i]) * b[j]) % p);
    trim(r);
    return r;
}

// remainder modulo monic f
Poly poly_mod(Poly a, const Poly& f, std::uint64_t p) {
    trim(a);
    const std::size_t df = f.size() - 1;
    while (a.size() > df) {
        const std::uint64_t c = a.back();
        a.pop_back();
        if (c != 0) {
            const std::size_t shift = a.size() - df;
            for (std::size_t i = 0; i < df; ++i)
                a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - f[i]) * c) % p);
        }
        trim(a);
    }
    return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint64_t p) {
    return poly_mod(poly_mul(a, b, p), f, p);
}

Poly poly_powmod(Poly a, std::uint64_t e, const Poly& f, std::uint64_t p) {
    Poly r{1};
    a = poly_mod(std::move(a), f, p);
    while (e != 0) {
        if (e & 1u)
            r = poly_mulmod(r, a, f, p);
        a = poly_mulmod(a, a, f, p);
        e >>= 1;
    }
    return r;
}

Poly poly_sub(Poly a, const Poly& b, std::uint64_t p) {
    if (a.size() < b.size())
        a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i)
        a[i] = static_cast<std::uint32_t>((a[i] + p - b[i]) % p);
    trim(a);
    return a;
}

Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        // scale b monic so poly_mod applies
        const std::uint64_t il = inv_mod(b.back(), p);
        Poly bm = b;
        for (auto& c : bm)
            c = static_cast<std::uint32_t>(c * il % p);
        Poly r = poly_mod(std::move(a), bm, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// monic degree-d polynomial irreducible over F_p, by the Frobenius chain:
// x^{p^d} = x mod f, and gcd(x^{p^{d/r}} - x, f) = 1 for every prime r | d
bool is_irreducible(const Poly& f, unsigned d, std::uint64_t p) {
    if (d == 1)
        return true;
    const Poly x{0, 1};
    std::vector<Poly> frob(d + 1);
    frob[0] = x;
    for (unsigned i = 1; i <= d; ++i)
        frob[i] = poly_powmod(frob[i - 1], p, f, p);
    if (frob[d] != x)
        return false;
    std::vector<std::uint64_t> rs = factorize(d);
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    for (std::uint64_t r : rs) {
        Poly diff = poly_sub(frob[d / r], x, p);
        if (diff.empty())
            return false; // x^{p^{d/r}} = x already: f splits below degree d
        Poly g = poly_gcd(f, std::move(diff), p);
        if (g.size() != 1)
            return false;
    }
    return true;
}

bool is_primitive(const Poly& g, const std::vector<std::uint64_t>& qbar_primes,
                  std::uint64_t qbar, const Poly& f, std::uint64_t p) {
    if (g.empty())
        return false;
    for (std::uint64_t r : qbar_primes)
        if (poly_powmod(g, qbar / r, f, p) == Poly{1})
            return false;
    return true;
}

// little-endian field helpers for the fixture format
void put_u32(std::ostream& o, std::uint32_t v) {
    char b[4] = {char(v), char(v >> 8), char(v >> 16), char(v >> 24)};
    o.write(b, 4);
}

void put_u64(std::ostream& o, std::uint64_t v) {
    put_u32(o, static_cast<std::uint32_t>(v));
    put_u32(o, static_cast<std::uint32_t>(v >> 32));
}

std::uint32_t get_u32(std::istream& i) {
    unsigned char b[4];
    i.read(reinterpret_cast<char*>(b), 4);
    if (!i)
        throw std::runtime_error("zech fixture: truncated file");
    return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
           std::uint32_t(b[3]) << 24;
}

std::uint64_t get_u64(std::istream& i) {
    const std::uint64_t lo = get_u32(i);
    return lo | std::uint64_t(get_u32(i)) << 32;
}

constexpr char kMagic[8] = {'F', 'F', 'Z', 'E', 'C', 'H', '0', '1'};

std::uint64_t checked_pow(std::uint64_t p, unsigned d) {
    u128 q = 1;
    for (unsigned i = 0; i < d; ++i) {
        q *= p;
        if (q > ZechField::max_cardinality)
            throw std::domain_error("ZechField: q = p^d exceeds the 2^30 index bound");
    }
    return static_cast<std::uint64_t>(q);
}

} // namespace

ZechField::ZechField(std::uint64_t p, unsigned d, std::size_t table_budget)
    : p_(p), d_(d) {
    if (!is_prime(p))
        throw std::domain_error("ZechField: characteristic must be prime");
    if (d == 0)
        throw std::domain_error("ZechField: extension degree must be at least 1");
    q_ = checked_pow(p, d);
    qbar_ = static_cast<zech_code>(q_ - 1);
    check_budget(table_budget);

    code_of_.assign(q_, -1);
    code_of_[0] = 0;
    elem_of_.assign(q_, 0);

    if (d_ == 1) {
        g_packed_ = primitive_root(p_);
        f_packed_ = 0;
    } else {
        search_modulus_and_generator();
    }
    enumerate_powers();
    t_plus1_.assign(q_, 0);
    finish_tables();
}

std::size_t ZechField::table_bytes() const {
    return t_plus1_.size() * sizeof(zech_code) + code_of_.size() * sizeof(zech_code) +
           elem_of_.size() * sizeof(std::uint32_t);
}

void ZechField::check_budget(std::size_t budget) const {
    const std::size_t need = std::size_t(q_) * (2 * sizeof(zech_code) + sizeof(std::uint32_t));
    if (need > budget)
        throw std::length_error("ZechField: tables for q = " + std::to_string(q_) + " need " +
                                std::to_string(need) + " bytes, budget is " +
                                std::to_string(budget));
}

void ZechField::search_modulus_and_generator() {
    // modulus: smallest monic irreducible, candidates ordered by packed
    // coefficient value (so the choice is reproducible)
    Poly f;
    std::uint64_t fc = 0;
    for (;; ++fc) {
        if (fc >= q_)
            throw std::logic_error("ZechField: no irreducible polynomial found");
        f = unpack(fc, d_, p_);
        f.push_back(1);
        if (is_irreducible(f, d_, p_))
            break;
    }
    f_packed_ = fc;

    // generator: first primitive element at or after x in packed order
    // (x, x+1, ..., then higher-degree candidates)
    std::vector<std::uint64_t> primes = factorize(q_ - 1);
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    for (std::uint64_t gc = p_;; ++gc) {
        if (gc >= q_)
            throw std::logic_error("ZechField: no primitive element found");
        Poly g = unpack(gc, d_, p_);
        trim(g);
        if (is_primitive(g, primes, q_ - 1, f, p_)) {
            g_packed_ = gc;
            return;
        }
    }
}

void ZechField::enumerate_powers() {
    if (d_ == 1) {
        const std::uint64_t g = g_packed_;
        if (g == 0 || g >= q_)
            throw std::runtime_error("ZechField: invalid generator");
        std::uint64_t cur = g % p_;
        if (cur == 0)
            throw std::runtime_error("ZechField: invalid generator");
        for (zech_code e = 1; e <= qbar_; ++e) {
            if (code_of_[cur] != -1)
                throw std::runtime_error("ZechField: generator is not primitive");
            code_of_[cur] = e;
            elem_of_[static_cast<std::size_t>(e)] = static_cast<std::uint32_t>(cur);
            cur = cur * g % p_;
        }
    } else {
        Poly f = unpack(f_packed_, d_, p_);
        f.push_back(1);
        Poly g = unpack(g_packed_, d_, p_);
        trim(g);
        if (g.empty())
            throw std::runtime_error("ZechField: invalid generator");
        Poly cur = g;
        for (zech_code e = 1; e <= qbar_; ++e) {
            const std::uint64_t idx = pack(cur, p_);
            if (idx == 0 || code_of_[idx] != -1)
                throw std::runtime_error("ZechField: generator is not primitive");
            code_of_[idx] = e;
            elem_of_[static_cast<std::size_t>(e)] = static_cast<std::uint32_t>(idx);
            cur = poly_mulmod(cur, g, f, p_);
        }
    }
    if (code_of_[1] != qbar_)
        throw std::runtime_error("ZechField: generator order is not q - 1");
}

void ZechField::finish_tables() {
    // 1 + g^k: bump the constant coefficient of the packed element
    for (zech_code k = 1; k <= qbar_; ++k) {
        const std::uint64_t e = elem_of_[static_cast<std::size_t>(k)];
        const std::uint64_t c0 = e % p_;
        const std::uint64_t bumped = e - c0 + (c0 + 1) % p_;
        t_plus1_[static_cast<std::size_t>(k)] = code_of_[bumped];
    }
    t_plus1_[0] = 0; // slot never read by the operations

    if (char_two()) {
        i_neg1_ = 0; // -1 = 1 = g^0: negation is the identity
        if (t_plus1_[static_cast<std::size_t>(qbar_)] != 0)
            throw std::logic_error("ZechField: 1 + 1 must vanish in characteristic 2");
    } else {
        i_neg1_ = code_of_[p_ - 1];
        if (i_neg1_ != qbar_ / 2)
            throw std::logic_error("ZechField: exponent of -1 is not (q-1)/2");
        if (t_plus1_[static_cast<std::size_t>(i_neg1_)] != 0)
            throw std::logic_error("ZechField: plus-one sentinel missing at the exponent of -1");
    }

    for (std::uint64_t v = 1; v < q_; ++v)
        if (code_of_[v] < 0)
            throw std::logic_error("ZechField: power enumeration missed an element");
}

void ZechField::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("ZechField::save: cannot open " + path);
    out.write(kMagic, sizeof kMagic);
    put_u32(out, static_cast<std::uint32_t>(p_));
    put_u32(out, d_);
    put_u64(out, q_);
    put_u64(out, g_packed_);
    put_u64(out, f_packed_);
    for (zech_code v : t_plus1_)
        put_u32(out, static_cast<std::uint32_t>(v));
    out.flush();
    if (!out)
        throw std::runtime_error("ZechField::save: write failed for " + path);
}

ZechField ZechField::load(const std::string& path, std::size_t table_budget) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("ZechField::load: cannot open " + path);
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw std::runtime_error("ZechField::load: bad magic in " + path);

    const std::uint32_t p = get_u32(in);
    const std::uint32_t d = get_u32(in);
    const std::uint64_t q = get_u64(in);
    const std::uint64_t g = get_u64(in);
    const std::uint64_t f = get_u64(in);
    if (!is_prime(p) || d == 0 || checked_pow(p, d) != q || g >= q || f >= q ||
        (d == 1 && f != 0))
        throw std::runtime_error("ZechField::load: inconsistent header in " + path);

    ZechField z;
    z.p_ = p;
    z.d_ = d;
    z.q_ = q;
    z.qbar_ = static_cast<zech_code>(q - 1);
    z.g_packed_ = g;
    z.f_packed_ = f;
    z.check_budget(table_budget);
    z.code_of_.assign(q, -1);
    z.code_of_[0] = 0;
    z.elem_of_.assign(q, 0);
    z.enumerate_powers();
    z.t_plus1_.assign(q, 0);
    z.finish_tables();

    // the stored table must agree with the rebuilt one entry for entry
    for (std::uint64_t k = 0; k < q; ++k) {
        const auto v = static_cast<zech_code>(get_u32(in));
        if (v != z.t_plus1_[k])
            throw std::runtime_error("ZechField::load: table entry " + std::to_string(k) +
                                     " does not match the field parameters");
    }
    if (in.get(); !in.eof())
        throw std::runtime_error("ZechField::load: trailing data in " + path);
    return z;
}

FullZechTables::FullZechTables(const ZechField& base, std::size_t table_budget)
    : q_(base.q()), qbar_(base.qbar()) {
    const std::size_t qb = static_cast<std::size_t>(qbar_);
    const std::size_t entries = 3 * (4 * qb + 1) + std::size_t(q_) + (2 * qb + 1);
    if (entries * sizeof(zech_code) > table_budget)
        throw std::length_error("FullZechTables: " + std::to_string(entries) +
                                " entries exceed the table budget");

    // multiplication zones; division reads the same array shifted by +qbar
    t_mul_.assign(4 * qb + 1, 0);
    for (std::size_t k = 0; k < qb; ++k)
        t_mul_[k] = static_cast<zech_code>(k);
    for (std::size_t k = qb; k < 2 * qb; ++k)
        t_mul_[k] = static_cast<zech_code>(k - qb);
    for (std::size_t k = 2 * qb; k <= 4 * qb; ++k)
        t_mul_[k] = 2 * qbar_;

    // z[r]: full code of 1 + g^r, straight out of the plus-one table
    std::vector<zech_code> z(qb);
    for (std::size_t r = 0; r < qb; ++r) {
        const zech_code plain = base.t_plus1()[r == 0 ? std::size_t(qbar_) : r];
        z[r] = from_plain(plain);
    }

    // offset layout: table index k + 2*qbar for k = j - i in [-2qbar, 2qbar].
    // k in [-2qbar, -(qbar+1)]  first operand is zero: result is g^j, j = k + 2qbar
    // k in [-(qbar-1), qbar-1]  both nonzero: exponent offset of 1 + g^k
    // k in [qbar+1, 2qbar]      second operand is zero: result is g^i
    // k = +-qbar                unreachable for valid code pairs
    const zech_code ineg = base.i_neg1();
    t_add_.assign(4 * qb + 1, 0);
    t_sub_.assign(4 * qb + 1, 0);
    const auto off = [qb](std::ptrdiff_t k) { return static_cast<std::size_t>(k + 2 * std::ptrdiff_t(qb)); };
    for (std::ptrdiff_t k = -2 * std::ptrdiff_t(qb); k <= -(std::ptrdiff_t(qb) + 1); ++k) {
        const zech_code j = static_cast<zech_code>(k + 2 * std::ptrdiff_t(qb));
        t_add_[off(k)] = static_cast<zech_code>(j - qbar_);
        t_sub_[off(k)] = static_cast<zech_code>((j + ineg) % qbar_ - qbar_);
    }
    for (std::ptrdiff_t k = -(std::ptrdiff_t(qb) - 1); k <= std::ptrdiff_t(qb) - 1; ++k) {
        const std::size_t r = static_cast<std::size_t>(((k % qbar_) + qbar_) % qbar_);
        const std::size_t rs = static_cast<std::size_t>((((k + ineg) % qbar_) + qbar_) % qbar_);
        t_add_[off(k)] = z[r];
        t_sub_[off(k)] = z[rs];
    }
    for (std::ptrdiff_t k = std::ptrdiff_t(qb) + 1; k <= 2 * std::ptrdiff_t(qb); ++k) {
        t_add_[off(k)] = 0;
        t_sub_[off(k)] = 0;
    }

    conv_in_.assign(q_, 0);
    for (std::uint64_t e = 0; e < q_; ++e)
        conv_in_[e] = from_plain(base.encode(e));
    conv_out_.assign(2 * qb + 1, 0);
    for (std::size_t c = 0; c < qb; ++c)
        conv_out_[c] = static_cast<std::uint32_t>(base.decode(c == 0 ? qbar_ : static_cast<zech_code>(c)));
    for (std::size_t c = qb; c < 2 * qb; ++c)
        conv_out_[c] = conv_out_[c - qb]; // exponent mirror, outside the valid codes
    conv_out_[2 * qb] = 0;
}

} // namespace ffdot
