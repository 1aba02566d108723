#pragma once

#include <cstddef>
#include <cstdlib>
#include <string>
#include <type_traits>

namespace causalmec {

/// Size caps for the exhaustive routines.
struct Limits {
  int oracle_max_n = 8;       // walk-enumeration d-separation oracle
  int signature_max_n = 14;   // full d-separation signature
  std::size_t mec_cap = 1'000'000;

  /// Defaults overridden by CAUSALMEC_ORACLE_CAP, CAUSALMEC_SIGNATURE_CAP
  /// and CAUSALMEC_MEC_CAP when set.
  static Limits from_environment() {
    Limits l;
    auto read = [](const char* name, auto& field) {
      if (const char* value = std::getenv(name); value && *value) {
        using T = std::remove_reference_t<decltype(field)>;
        field = static_cast<T>(std::stoull(value));
      }
    };
    read("CAUSALMEC_ORACLE_CAP", l.oracle_max_n);
    read("CAUSALMEC_SIGNATURE_CAP", l.signature_max_n);
    read("CAUSALMEC_MEC_CAP", l.mec_cap);
    return l;
  }
};

}  // namespace causalmec
