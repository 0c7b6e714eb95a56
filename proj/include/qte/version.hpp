#pragma once

namespace qte {

// Version string stamped into audit reports and serialized files.
inline constexpr const char* artifact_version = "1.0.0";

// On-disk file schema revision; bumped only on breaking layout changes.
inline constexpr int file_schema = 1;

}  // namespace qte
