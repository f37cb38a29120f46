#pragma once

#include <array>
#include <cstdint>

namespace polyclust {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
class Philox4x32 {
public:
    using counter_type = std::array<std::uint32_t, 4>;
    using key_type = std::array<std::uint32_t, 2>;

    static counter_type apply(counter_type ctr, key_type key) noexcept
    {
        for (int r = 0; r < 10; ++r) {
            if (r > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }
};

/**
 * Random stream addressed by (seed, degree, index, trial).
 *
 * Draw d of a stream is block d/2 of Philox keyed by the seed, so any
 * coefficient of any trial can be regenerated without touching the others.
 */
class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint32_t degree, std::uint32_t index, std::uint32_t trial) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          degree_(degree), index_(index), trial_(trial)
    {
    }

    std::uint64_t next_u64() noexcept
    {
        if (slot_ == 2) {
            block_ = Philox4x32::apply({index_, block_index_, trial_, degree_}, key_);
            ++block_index_;
            slot_ = 0;
        }
        const auto hi = block_[2 * slot_];
        const auto lo = block_[2 * slot_ + 1];
        ++slot_;
        return (std::uint64_t{hi} << 32) | lo;
    }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform_open() noexcept { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    /// Uniform integer on [0, n) by unbiased rejection.
    std::uint64_t below(std::uint64_t n) noexcept
    {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

private:
    Philox4x32::key_type key_;
    std::uint32_t degree_, index_, trial_;
    std::uint32_t block_index_ = 0;
    Philox4x32::counter_type block_{};
    int slot_ = 2;
};

} // namespace polyclust
