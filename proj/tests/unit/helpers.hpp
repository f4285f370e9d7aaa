#pragma once

#include <filesystem>
#include <string>

#include "doctest.h"
#include "gcae/error.hpp"

#define CHECK_GCAE_ERROR(expr, expected_kind)                                  \
  do {                                                                         \
    bool gcae_thrown_ = false;                                                 \
    try {                                                                      \
      (void)(expr);                                                            \
    } catch (const ::gcae::Error& gcae_err_) {                                 \
      gcae_thrown_ = true;                                                     \
      CHECK_MESSAGE(gcae_err_.kind() == (expected_kind),                       \
                    "got " << ::gcae::to_string(gcae_err_.kind()) << ": "      \
                           << gcae_err_.what());                               \
    }                                                                          \
    CHECK_MESSAGE(gcae_thrown_, "expected " << ::gcae::to_string(expected_kind)); \
  } while (0)

namespace testutil {

inline std::filesystem::path fixture(const std::string& rel) {
  return std::filesystem::path(GCAE_FIXTURE_DIR) / rel;
}

/// Fresh, empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("gcae_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testutil
