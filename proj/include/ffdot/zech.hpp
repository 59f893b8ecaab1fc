#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

// Discrete-log representation of GF(q), q = p^d: a nonzero element g^i is
// handled purely through its exponent ("code") and one plus-one table
// t_plus1 with g^{t_plus1[k]} = 1 + g^k. All seven field operations reduce
// to signed index adds, comparisons and (for add/sub) one table access.
//
// Code convention (the "plain" encoding):
//     zero       -> 0
//     one        -> q-1   (written qbar)
//     g^i        -> i     for 1 <= i < qbar
// so the nonzero codes are exactly [1, qbar] and index arithmetic stays in
// a signed 32-bit word as long as q <= 2^30.
//
// i_neg1 is the exponent of -1 ((q-1)/2 in odd characteristic). In
// characteristic 2 it is 0 (-1 = 1 = g^0): negation is the identity and
// subtraction aliases addition.

namespace ffdot {

using zech_code = std::int32_t;

struct OpCounters {
    std::uint64_t adds = 0;     // index additions/subtractions
    std::uint64_t tests = 0;    // comparisons
    std::uint64_t accesses = 0; // table lookups

    OpCounters& operator+=(const OpCounters& o) {
        adds += o.adds;
        tests += o.tests;
        accesses += o.accesses;
        return *this;
    }
    bool operator==(const OpCounters&) const = default;
};

namespace detail {

struct NoRecord {
    void add(int = 1) const {}
    void test(int = 1) const {}
    void access(int = 1) const {}
};

struct Record {
    OpCounters* c;
    void add(int n = 1) const { c->adds += static_cast<std::uint64_t>(n); }
    void test(int n = 1) const { c->tests += static_cast<std::uint64_t>(n); }
    void access(int n = 1) const { c->accesses += static_cast<std::uint64_t>(n); }
};

} // namespace detail

class ZechField {
public:
    static constexpr std::uint64_t max_cardinality = std::uint64_t(1) << 30;
    static constexpr std::size_t default_table_budget = std::size_t(64) << 20; // bytes

    // GF(p^d); for d >= 2 a monic irreducible modulus and a primitive
    // element are searched deterministically (see the .cpp).
    explicit ZechField(std::uint64_t p, unsigned d = 1,
                       std::size_t table_budget = default_table_budget);

    std::uint64_t p() const { return p_; }
    unsigned d() const { return d_; }
    std::uint64_t q() const { return q_; }
    zech_code qbar() const { return qbar_; }
    bool char_two() const { return p_ == 2; }

    zech_code zero_code() const { return 0; }
    zech_code one_code() const { return qbar_; }
    zech_code i_neg1() const { return i_neg1_; }

    // generator and modulus polynomial, packed base p, low coefficient
    // first (f omits its leading 1; 0 when d = 1)
    std::uint64_t g_packed() const { return g_packed_; }
    std::uint64_t f_packed() const { return f_packed_; }

    const std::vector<zech_code>& t_plus1() const { return t_plus1_; }
    std::size_t table_bytes() const;

    // elements are residues for d = 1, base-p packed coefficient vectors
    // for extensions
    zech_code encode(std::uint64_t elem) const {
        if (elem >= q_)
            throw std::domain_error("ZechField::encode: element out of range");
        return code_of_[elem];
    }

    std::uint64_t decode(zech_code c) const {
        if (c < 0 || c > qbar_)
            throw std::domain_error("ZechField::decode: invalid code");
        return elem_of_[static_cast<std::size_t>(c)];
    }

    // ---- the seven operations on plain codes ----------------------------
    // Zero-operand handling is a branch on the zero code before any index
    // arithmetic; the index work itself is exactly the counted sequences
    // below.

    zech_code mul(zech_code i, zech_code j) const {
        if (i == 0 || j == 0)
            return 0;
        return mul_impl(i, j, detail::NoRecord{});
    }

    zech_code div(zech_code i, zech_code j) const {
        if (j == 0)
            throw std::domain_error("ZechField::div: division by zero");
        if (i == 0)
            return 0;
        return div_impl(i, j, detail::NoRecord{});
    }

    zech_code neg(zech_code i) const {
        if (i == 0 || char_two())
            return i;
        return neg_impl(i, detail::NoRecord{});
    }

    zech_code add(zech_code i, zech_code j) const {
        if (i == 0)
            return j;
        if (j == 0)
            return i;
        return add_impl(i, j, detail::NoRecord{});
    }

    zech_code sub(zech_code i, zech_code j) const {
        if (j == 0)
            return i;
        if (i == 0)
            return neg(j);
        if (char_two())
            return add_impl(i, j, detail::NoRecord{});
        return sub_impl(i, j, detail::NoRecord{});
    }

    zech_code axpy(zech_code a, zech_code x, zech_code y) const {
        return add(mul(a, x), y);
    }

    zech_code axpyin(zech_code r, zech_code a, zech_code x) const {
        return axpy(a, x, r);
    }

    // ---- counted variants (nonzero operands) ----------------------------
    // Identical results, with every index add/sub, comparison and table
    // access on the executed path recorded.

    zech_code counted_mul(zech_code i, zech_code j, OpCounters& c) const {
        require_nonzero(i, j);
        return mul_impl(i, j, detail::Record{&c});
    }

    zech_code counted_div(zech_code i, zech_code j, OpCounters& c) const {
        require_nonzero(i, j);
        return div_impl(i, j, detail::Record{&c});
    }

    zech_code counted_neg(zech_code i, OpCounters& c) const {
        require_nonzero(i, i);
        if (char_two())
            return i;
        return neg_impl(i, detail::Record{&c});
    }

    zech_code counted_add(zech_code i, zech_code j, OpCounters& c) const {
        require_nonzero(i, j);
        return add_impl(i, j, detail::Record{&c});
    }

    zech_code counted_sub(zech_code i, zech_code j, OpCounters& c) const {
        require_nonzero(i, j);
        if (char_two())
            return add_impl(i, j, detail::Record{&c});
        return sub_impl(i, j, detail::Record{&c});
    }

    zech_code counted_axpy(zech_code a, zech_code x, zech_code y, OpCounters& c) const {
        require_nonzero(a, x);
        require_nonzero(y, y);
        const zech_code m = mul_impl(a, x, detail::Record{&c});
        return add_impl(m, y, detail::Record{&c});
    }

    // ---- fixture serialization ------------------------------------------
    void save(const std::string& path) const;
    static ZechField load(const std::string& path,
                          std::size_t table_budget = default_table_budget);

private:
    friend class FullZechTables;

    ZechField() = default; // for load()

    void search_modulus_and_generator(); // d >= 2: pick f and g deterministically
    void enumerate_powers();             // fill code_of_/elem_of_ by walking g^i
    void finish_tables();                // t_plus1 + i_neg1 from the power maps
    void check_budget(std::size_t budget) const;

    static void require_nonzero(zech_code a, zech_code b) {
        if (a == 0 || b == 0)
            throw std::invalid_argument("zech counted op: operands must be nonzero");
    }

    template <class R>
    zech_code mul_impl(zech_code i, zech_code j, R r) const {
        zech_code k = i + j;
        r.add();
        r.test();
        if (k > qbar_) {
            k -= qbar_;
            r.add();
        }
        return k;
    }

    template <class R>
    zech_code div_impl(zech_code i, zech_code j, R r) const {
        zech_code k = i - j;
        r.add();
        r.test();
        if (k <= 0) {
            k += qbar_;
            r.add();
        }
        return k;
    }

    template <class R>
    zech_code neg_impl(zech_code i, R r) const {
        zech_code k = i - i_neg1_;
        r.add();
        r.test();
        if (k <= 0) {
            k += qbar_;
            r.add();
        }
        return k;
    }

    template <class R>
    zech_code add_impl(zech_code i, zech_code j, R r) const {
        zech_code k = j - i;
        r.add();
        r.test();
        if (k <= 0) {
            k += qbar_;
            r.add();
        }
        const zech_code t = t_plus1_[static_cast<std::size_t>(k)];
        r.access();
        zech_code res = i + t;
        r.add();
        r.test();
        if (res > qbar_) {
            res -= qbar_;
            r.add();
        }
        // t == 0 marks 1 + g^k = 0: select the zero code after the (always
        // executed, always counted) index tail
        return t == 0 ? 0 : res;
    }

    template <class R>
    zech_code sub_impl(zech_code i, zech_code j, R r) const {
        zech_code k = j - i + i_neg1_;
        r.add(2);
        r.test();
        if (k <= 0) {
            k += qbar_;
            r.add();
        } else {
            r.test();
            if (k > qbar_) {
                k -= qbar_;
                r.add();
            }
        }
        const zech_code t = t_plus1_[static_cast<std::size_t>(k)];
        r.access();
        zech_code res = i + t;
        r.add();
        r.test();
        if (res > qbar_) {
            res -= qbar_;
            r.add();
        }
        return t == 0 ? 0 : res;
    }

    std::uint64_t p_ = 0;
    unsigned d_ = 1;
    std::uint64_t q_ = 0;
    zech_code qbar_ = 0;
    zech_code i_neg1_ = 0;
    std::uint64_t g_packed_ = 0;
    std::uint64_t f_packed_ = 0;
    std::vector<zech_code> t_plus1_; // length q; [0] unused, sentinel 0 at i_neg1
    std::vector<zech_code> code_of_; // element index -> code, length q
    std::vector<std::uint32_t> elem_of_; // code -> element index, length q
};

// The fully tabulated flavour: zero is recoded as 2*qbar and one as 0, so
// that multiplication and division become pure lookups into one extended
// table with three zones:
//     t_mul[k] = k        for 0    <= k < qbar
//     t_mul[k] = k - qbar for qbar <= k < 2*qbar
//     t_mul[k] = 2*qbar   for 2*qbar <= k <= 4*qbar   (zero absorbs)
// Division reads the same table through a +qbar shift. Addition and
// subtraction get their own extension tables over j-i in [-2*qbar, 2*qbar]
// whose entries are exponent offsets folded through t_mul. Including both
// conversion tables the total footprint is 15q - 10 entries (about 15q).
class FullZechTables {
public:
    explicit FullZechTables(const ZechField& base,
                            std::size_t table_budget = ZechField::default_table_budget);

    zech_code zero_code() const { return 2 * qbar_; }
    zech_code one_code() const { return 0; }
    zech_code qbar() const { return qbar_; }
    std::uint64_t q() const { return q_; }

    zech_code from_plain(zech_code c) const {
        if (c == 0)
            return 2 * qbar_;
        return c == qbar_ ? 0 : c;
    }

    zech_code to_plain(zech_code c) const {
        if (c == 2 * qbar_)
            return 0;
        return c == 0 ? qbar_ : c;
    }

    zech_code mul(zech_code i, zech_code j) const {
        return t_mul_[std::size_t(std::ptrdiff_t(i) + j)];
    }

    zech_code div(zech_code i, zech_code j) const {
        if (j == 2 * qbar_)
            throw std::domain_error("FullZechTables::div: division by zero");
        return t_mul_[std::size_t(std::ptrdiff_t(i) - j + qbar_)];
    }

    zech_code add(zech_code i, zech_code j) const {
        const zech_code t = t_add_[std::size_t(std::ptrdiff_t(j) - i + 2 * qbar_)];
        return t_mul_[std::size_t(std::ptrdiff_t(i) + t)];
    }

    zech_code sub(zech_code i, zech_code j) const {
        const zech_code t = t_sub_[std::size_t(std::ptrdiff_t(j) - i + 2 * qbar_)];
        return t_mul_[std::size_t(std::ptrdiff_t(i) + t)];
    }

    zech_code encode(std::uint64_t elem) const {
        if (elem >= q_)
            throw std::domain_error("FullZechTables::encode: element out of range");
        return conv_in_[elem];
    }

    std::uint64_t decode(zech_code c) const {
        if (c < 0 || c > 2 * qbar_)
            throw std::domain_error("FullZechTables::decode: invalid code");
        return conv_out_[static_cast<std::size_t>(c)];
    }

    const std::vector<zech_code>& t_mul() const { return t_mul_; }
    const std::vector<zech_code>& t_add() const { return t_add_; }
    const std::vector<zech_code>& t_sub() const { return t_sub_; }

    std::size_t total_entries() const {
        return t_mul_.size() + t_add_.size() + t_sub_.size() + conv_in_.size() +
               conv_out_.size();
    }

private:
    std::uint64_t q_ = 0;
    zech_code qbar_ = 0;
    std::vector<zech_code> t_mul_;           // [0, 4*qbar]
    std::vector<zech_code> t_add_;           // j-i in [-2*qbar, 2*qbar], offset 2*qbar
    std::vector<zech_code> t_sub_;           // same domain
    std::vector<zech_code> conv_in_;         // element index -> full code
    std::vector<std::uint32_t> conv_out_;    // full code -> element index
};

} // namespace ffdot
