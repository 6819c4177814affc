#pragma once

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "psurf/errors.hpp"

namespace testutil {

// Runs f, expecting a psurf::error of the given kind; returns its message.
template <class F>
std::string expect_error(psurf::errc kind, F&& f) {
  try {
    f();
  } catch (const psurf::error& e) {
    CHECK(e.kind() == kind);
    return e.what();
  } catch (...) {
    FAIL("wrong exception type");
    return {};
  }
  FAIL("no exception thrown");
  return {};
}

// Unique scratch directory, removed on destruction.
class TempDir {
public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() /
            ("psurf_test_" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

private:
  std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  f << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace testutil
