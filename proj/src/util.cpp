#include "lamlab/util.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <system_error>

namespace lamlab {

void kahan_sum::add(double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
        c += (s - t) + x;
    else
        c += (x - t) + s;
    s = t;
}

long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }

long long lcm_ll(long long a, long long b) {
    if (a == 0 || b == 0) return 0;
    return a / std::gcd(a, b) * b;
}

fraction::fraction(long long n, long long d) {
    if (d == 0) throw std::invalid_argument("fraction: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    long long g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num = n;
    den = d;
}

bool fraction::operator==(const fraction& o) const {
    return static_cast<__int128>(num) * o.den == static_cast<__int128>(o.num) * den;
}

bool fraction::operator<(const fraction& o) const {
    return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
}

std::uint64_t splitmix64::at(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t splitmix64::next_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("next_below: n must be positive");
    // rejection to avoid modulo bias; negligible loop count for small n
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % n;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64::at(seed ^ 0xA5A5A5A5DEADBEEFULL, stream);
}

namespace {

// SHA-256 per FIPS 180-4.
struct sha256_ctx {
    std::uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                          0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    std::uint64_t length = 0;
    std::array<std::uint8_t, 64> buf{};
    std::size_t buffered = 0;

    static std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

    void block(const std::uint8_t* p) {
        static const std::uint32_t k[64] = {
            0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
            0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
            0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
            0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
            0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
            0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
            0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
            0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
            0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
            0xc67178f2};
        std::uint32_t w[64];
        for (int i = 0; i < 16; i++)
            w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
                   (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
        for (int i = 16; i < 64; i++) {
            std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4], f = h[5], g = h[6],
                      hh = h[7];
        for (int i = 0; i < 64; i++) {
            std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            std::uint32_t ch = (e & f) ^ (~e & g);
            std::uint32_t t1 = hh + s1 + ch + k[i] + w[i];
            std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            std::uint32_t t2 = s0 + maj;
            hh = g;
            g = f;
            f = e;
            e = d + t1;
            d = c;
            c = b;
            b = a;
            a = t1 + t2;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
        h[5] += f;
        h[6] += g;
        h[7] += hh;
    }

    void update(const std::uint8_t* p, std::size_t n) {
        length += n;
        while (n > 0) {
            std::size_t take = std::min(n, buf.size() - buffered);
            std::memcpy(buf.data() + buffered, p, take);
            buffered += take;
            p += take;
            n -= take;
            if (buffered == buf.size()) {
                block(buf.data());
                buffered = 0;
            }
        }
    }

    std::string finish() {
        std::uint64_t bits = length * 8;
        std::uint8_t pad = 0x80;
        update(&pad, 1);
        std::uint8_t zero = 0;
        while (buffered != 56) update(&zero, 1);
        std::uint8_t len[8];
        for (int i = 0; i < 8; i++) len[i] = std::uint8_t(bits >> (56 - 8 * i));
        update(len, 8);
        static const char* hex = "0123456789abcdef";
        std::string out(64, '0');
        for (int i = 0; i < 8; i++)
            for (int j = 0; j < 4; j++) {
                std::uint8_t byte = std::uint8_t(h[i] >> (24 - 8 * j));
                out[8 * i + 2 * j] = hex[byte >> 4];
                out[8 * i + 2 * j + 1] = hex[byte & 0xf];
            }
        return out;
    }
};

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    sha256_ctx ctx;
    ctx.update(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size());
    return ctx.finish();
}

std::string format_double(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc()) throw std::runtime_error("format_double failed");
    return std::string(buf, end);
}

csv_writer::csv_writer(const std::vector<std::string>& header) { row(header); }

void csv_writer::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); i++) {
        if (i) body += ',';
        body += cells[i];
    }
    body += '\n';
}

void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

}  // namespace lamlab
