#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>
#include <string>

#include "doctest.h"
#include "lamlab/util.hpp"

using namespace lamlab;

TEST_SUITE("util") {

TEST_CASE("splitmix64 reference stream") {
    // reference outputs of the published splitmix64 recurrence, computed independently
    CHECK(splitmix64::at(0, 0) == 0xE220A8397B1DCDAFULL);
    CHECK(splitmix64::at(0, 1) == 0x6E789E6AA1B965F4ULL);
    CHECK(splitmix64::at(0, 2) == 0x06C45D188009454FULL);
    CHECK(splitmix64::at(12345, 0) == 0x22118258A9D111A0ULL);
    CHECK(splitmix64::at(12345, 1) == 0x346EDCE5F713F8EDULL);

    splitmix64 rng(0);
    CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
    CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
    CHECK(rng.counter == 2);
}

TEST_CASE("splitmix64 is a pure function of (seed, counter)") {
    splitmix64 a(99), b(99);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    for (int i = 0; i < 1000; ++i) {
        double u = a.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(a.next_below(7) < 7);
    }
    CHECK_THROWS_AS(a.next_below(0), std::invalid_argument);
}

TEST_CASE("derive_seed separates streams") {
    std::set<std::uint64_t> seen;
    for (int s = 0; s < 200; ++s) seen.insert(derive_seed(42, s));
    CHECK(seen.size() == 200);
    CHECK(derive_seed(42, 7) == derive_seed(42, 7));
    CHECK(derive_seed(42, 7) != derive_seed(43, 7));
}

TEST_CASE("fraction arithmetic is canonical") {
    fraction a(2, 4);
    CHECK(a.num == 1);
    CHECK(a.den == 2);
    fraction b(-3, -6);
    CHECK(b == a);
    CHECK(fraction(1, 3) < fraction(1, 2));
    CHECK(fraction(-1, 2) < fraction(1, 3));
    CHECK(fraction(0, 5) == fraction(0, 1));
    CHECK_THROWS_AS(fraction(1, 0), std::invalid_argument);
    CHECK(gcd_ll(12, 18) == 6);
    CHECK(lcm_ll(4, 6) == 12);
}

TEST_CASE("sha256 matches the standard vectors") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("format_double round-trips") {
    const double xs[] = {0.0,       1.0,   -1.0,  0.1,    1.0 / 3.0, 1e300,
                         1e-300,    0.25,  -0.05, 2.0,    3.141592653589793,
                         6.02e23,   -42.0, 1e-12, 123456789.123456789};
    for (double x : xs) {
        const std::string s = format_double(x);
        CHECK(std::stod(s) == x);
    }
    splitmix64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        double x = (rng.next_double() - 0.5) * std::pow(10.0, (double)(rng.next_below(40)) - 20.0);
        CHECK(std::stod(format_double(x)) == x);
    }
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("kahan summation is exact where naive addition loses") {
    kahan_sum s;
    s.add(1e16);
    s.add(1.0);
    s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == 2.0);
}

TEST_CASE("csv dialect: comma, point, LF, header first") {
    csv_writer w({"a", "b", "c"});
    w.row({"1", "0.5", "x"});
    w.row({"2", "-0.25", "y"});
    CHECK(w.body == "a,b,c\n1,0.5,x\n2,-0.25,y\n");
}

TEST_CASE("atomic file write and read round trip") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "lamlab_util_test";
    fs::create_directories(dir);
    const fs::path p = dir / "payload.txt";
    atomic_write_file(p, "hello\nworld\n");
    CHECK(read_file(p) == "hello\nworld\n");
    atomic_write_file(p, "second");
    CHECK(read_file(p) == "second");
    // no stray temporaries survive
    int files = 0;
    for (auto& e : fs::directory_iterator(dir)) {
        (void)e;
        ++files;
    }
    CHECK(files == 1);
    fs::remove_all(dir);
    CHECK_THROWS(read_file(dir / "missing.txt"));
}

}  // TEST_SUITE
