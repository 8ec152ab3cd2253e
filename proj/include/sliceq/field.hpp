#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>

namespace sliceq {

/// Deterministic seedable random source. All randomness in the library flows
/// through this type, so every result is reproducible from a 64-bit seed.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}
    uint64_t next_u64() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

/// Derives the seed of round `round` (0-based) from the top-level seed.
/// splitmix64 finalizer; fixed so that rounds are independent and the whole
/// run is reproducible regardless of evaluation order.
inline uint64_t mix_seed(uint64_t seed, uint64_t round) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (round + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

enum class FieldTag { p61, gf2_64 };

/// |F| as a decimal string, for exact error-bound reporting.
inline std::string field_size_string(FieldTag tag) {
    return tag == FieldTag::p61 ? "2305843009213693951" : "18446744073709551616";
}

/// The prime field F_p with p = 2^61 - 1. Values are canonical in [0, p).
class Fp61 {
public:
    static constexpr uint64_t modulus = (uint64_t{1} << 61) - 1;

    constexpr Fp61() = default;

    /// Reduces an arbitrary 64-bit value into the canonical range.
    static constexpr Fp61 from_u64(uint64_t v) {
        v = (v & modulus) + (v >> 61);
        if (v >= modulus) v -= modulus;
        return Fp61(v, raw_tag{});
    }

    constexpr uint64_t value() const { return v_; }

    friend constexpr Fp61 operator+(Fp61 a, Fp61 b) {
        uint64_t r = a.v_ + b.v_;
        if (r >= modulus) r -= modulus;
        return Fp61(r, raw_tag{});
    }

    friend constexpr Fp61 operator*(Fp61 a, Fp61 b) {
        // 128-bit product, then Mersenne folding: 2^61 = 1 (mod p).
        unsigned __int128 p = static_cast<unsigned __int128>(a.v_) * b.v_;
        uint64_t r = (static_cast<uint64_t>(p) & modulus) + static_cast<uint64_t>(p >> 61);
        r = (r & modulus) + (r >> 61);
        if (r >= modulus) r -= modulus;
        return Fp61(r, raw_tag{});
    }

    Fp61& operator+=(Fp61 o) { return *this = *this + o; }
    Fp61& operator*=(Fp61 o) { return *this = *this * o; }
    friend constexpr bool operator==(Fp61 a, Fp61 b) { return a.v_ == b.v_; }
    friend constexpr bool operator!=(Fp61 a, Fp61 b) { return a.v_ != b.v_; }

    static constexpr Fp61 zero() { return Fp61(); }
    static constexpr Fp61 one() { return Fp61(1, raw_tag{}); }
    static constexpr FieldTag tag() { return FieldTag::p61; }

    /// Uniform over [0, p): draws 61-bit values, rejecting the one pattern >= p.
    static Fp61 sample(Rng& rng) {
        uint64_t v;
        do {
            v = rng.next_u64() & modulus;
        } while (v >= modulus);
        return Fp61(v, raw_tag{});
    }

private:
    struct raw_tag {};
    constexpr Fp61(uint64_t v, raw_tag) : v_(v) {}
    uint64_t v_ = 0;
};

/// GF(2^64). Bit i of the mask is the coefficient of x^i; multiplication is
/// carry-less, reduced modulo the irreducible x^64 + x^4 + x^3 + x + 1.
class Gf2_64 {
public:
    static constexpr uint64_t reduction = 0x1b;  // x^4 + x^3 + x + 1

    constexpr Gf2_64() = default;
    static constexpr Gf2_64 from_mask(uint64_t m) { return Gf2_64(m); }
    constexpr uint64_t mask() const { return m_; }

    friend constexpr Gf2_64 operator+(Gf2_64 a, Gf2_64 b) { return Gf2_64(a.m_ ^ b.m_); }

    friend constexpr Gf2_64 operator*(Gf2_64 a, Gf2_64 b) {
        auto [hi, lo] = clmul(a.m_, b.m_);
        // Fold the high half twice: x^64 = x^4 + x^3 + x + 1, and the first
        // fold still overflows by at most deg(reduction) bits.
        auto [hi2, lo2] = clmul(hi, reduction);
        lo ^= lo2 ^ clmul(hi2, reduction).second;
        return Gf2_64(lo);
    }

    Gf2_64& operator+=(Gf2_64 o) { return *this = *this + o; }
    Gf2_64& operator*=(Gf2_64 o) { return *this = *this * o; }
    friend constexpr bool operator==(Gf2_64 a, Gf2_64 b) { return a.m_ == b.m_; }
    friend constexpr bool operator!=(Gf2_64 a, Gf2_64 b) { return a.m_ != b.m_; }

    static constexpr Gf2_64 zero() { return Gf2_64(); }
    static constexpr Gf2_64 one() { return Gf2_64(1); }
    static constexpr FieldTag tag() { return FieldTag::gf2_64; }

    static Gf2_64 sample(Rng& rng) { return Gf2_64(rng.next_u64()); }

private:
    explicit constexpr Gf2_64(uint64_t m) : m_(m) {}

    // Carry-less 64x64 -> 128-bit product, returned as (hi, lo).
    static constexpr std::pair<uint64_t, uint64_t> clmul(uint64_t a, uint64_t b) {
        uint64_t lo = 0, hi = 0;
        for (int i = 0; i < 64; ++i) {
            if ((b >> i) & 1) {
                lo ^= a << i;
                if (i) hi ^= a >> (64 - i);
            }
        }
        return {hi, lo};
    }

    uint64_t m_ = 0;
};

}  // namespace sliceq
