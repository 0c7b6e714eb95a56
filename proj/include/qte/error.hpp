#pragma once

#include <stdexcept>
#include <string>

namespace qte {

// Library-wide exception. The message always starts with a stable short
// reason ("shape mismatch", "not CPTP", "dimension cap exceeded", ...)
// followed by context, so callers and the audit runner can report failures
// without string surgery.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(what);
}

}  // namespace qte
