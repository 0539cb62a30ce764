#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace lamlab {

// Thrown when an input exceeds a documented enumeration cap; the CLI maps it to exit code 3.
struct capacity_error : std::runtime_error {
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// Neumaier-compensated accumulator; exact enough for the 1e-9 partition-function residuals.
struct kahan_sum {
    double s = 0.0;
    double c = 0.0;
    void add(double x);
    double value() const { return s + c; }
};

// Positive remainder, also for negative a.
inline int mod(int a, int m) {
    int r = a % m;
    return r < 0 ? r + m : r;
}
inline long long mod_ll(long long a, long long m) {
    long long r = a % m;
    return r < 0 ? r + m : r;
}

// Exact rational value, used wherever the optional integer-scaled energy mode needs
// tie-proof comparisons (cycle means, Peierls ratios).
struct fraction {
    long long num = 0;
    long long den = 1;  // > 0

    fraction() = default;
    fraction(long long n, long long d);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const fraction& o) const;
    bool operator<(const fraction& o) const;
    bool operator<=(const fraction& o) const { return *this < o || *this == o; }
};

long long gcd_ll(long long a, long long b);
long long lcm_ll(long long a, long long b);

// splitmix64: counter-based generator with a 64-bit seed; draw k is a pure function of
// (seed, k), which is what makes runs replayable from a manifest.
struct splitmix64 {
    std::uint64_t seed = 0;
    std::uint64_t counter = 0;

    explicit splitmix64(std::uint64_t s = 0) : seed(s) {}
    static std::uint64_t at(std::uint64_t seed, std::uint64_t counter);
    std::uint64_t next() { return at(seed, counter++); }
    // uniform in [0,1)
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    // uniform in [0,n)
    std::uint64_t next_below(std::uint64_t n);
};

// Derive an independent stream seed for a labelled sub-task (chain index, scan cell, ...).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

std::string sha256_hex(const std::string& bytes);

// Format a double so that it parses back to the same bits (shortest round-trip form).
std::string format_double(double x);

// CSV with fixed dialect: comma, '.' decimal point, LF, header row.
struct csv_writer {
    std::string body;
    explicit csv_writer(const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);
};

// Write via temp file + rename so readers never observe partial output.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace lamlab
