#include "doctest.h"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

#include "viscotherm/util.hpp"

using namespace viscotherm;

TEST_CASE("fnv1a64 matches published vectors") {
  CHECK(fnv1a64(std::string("")) == 0xcbf29ce484222325ull);
  CHECK(fnv1a64(std::string("a")) == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64(std::string("foobar")) == 0x85944171f73967e8ull);
}

TEST_CASE("atomic_write_file round-trips and creates parents") {
  const std::string dir = "/tmp/viscotherm_util_test";
  const std::string path = dir + "/nested/deep/file.txt";
  std::remove(path.c_str());
  const std::string payload = "line1\nline2\n\x01\x02 binary-ish";
  atomic_write_file(path, payload);
  CHECK(read_file(path) == payload);
  atomic_write_file(path, "replaced");
  CHECK(read_file(path) == "replaced");
  CHECK_THROWS_AS((void)read_file(dir + "/missing.txt"), ConfigError);
}

TEST_CASE("format_double survives a parse round-trip bit-exactly") {
  for (double v : {1.0 / 3.0, 0.1, -2.5e-17, 1e308, 0.0, -0.0, 123456789.123456789}) {
    const std::string s = format_double(v);
    const double back = std::strtod(s.c_str(), nullptr);
    CHECK(back == v);
  }
}

TEST_CASE("iso_timestamp_now has the expected shape") {
  const std::string t = iso_timestamp_now();
  REQUIRE(t.size() == 20);
  CHECK(t[4] == '-');
  CHECK(t[10] == 'T');
  CHECK(t[19] == 'Z');
}

TEST_CASE("sum_pairwise is exact on integers and deterministic") {
  std::vector<double> v(1000);
  std::iota(v.begin(), v.end(), 1.0);
  CHECK(sum_pairwise(v) == 1000.0 * 1001.0 / 2.0);
  CHECK(sum_pairwise(std::span<const double>(v.data(), 0)) == 0.0);
  CHECK(sum_pairwise(std::span<const double>(v.data(), 1)) == 1.0);
  // same bits on repeated evaluation
  std::vector<double> r(257);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::sin(0.1 * double(i)) * 1e-3;
  CHECK(sum_pairwise(r) == sum_pairwise(r));
}

TEST_CASE("parallel_for_blocks covers each index once for any thread count") {
  const std::size_t n = 1003;
  for (int nt : {1, 2, 3, 7, 64}) {
    std::vector<std::atomic<int>> hits(n);
    for (auto& h : hits) h.store(0);
    parallel_for_blocks(n, nt, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) hits[i].fetch_add(1);
    });
    for (std::size_t i = 0; i < n; ++i) CHECK(hits[i].load() == 1);
  }
  parallel_for_blocks(0, 4, [&](std::size_t, std::size_t) { CHECK(false); });
}

TEST_CASE("parallel_for_blocks results do not depend on the partition") {
  const std::size_t n = 512;
  std::vector<double> a(n), b(n);
  auto kernel = [](std::vector<double>& out) {
    return [&out](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i)
        out[i] = std::exp(std::sin(0.01 * double(i)));
    };
  };
  parallel_for_blocks(n, 1, kernel(a));
  parallel_for_blocks(n, 5, kernel(b));
  for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == b[i]);
}
