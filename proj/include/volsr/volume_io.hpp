#pragma once

#include <string>

#include "volsr/volume.hpp"

namespace volsr {

enum class VolumeDType { f32, f64 };

/// Writes `<base>.volhdr` (text: dims=m,n,s / dtype=f32|f64 / order=lex) and
/// `<base>.vol` (raw little-endian scalars, lexicographic order). `base` may
/// carry one of the two extensions already; it is stripped.
void save_volume(const Volume3D& v, const std::string& base, VolumeDType dtype = VolumeDType::f64);

/// Reads the pair back; f32 payloads are promoted to double. Rejects unknown
/// header keys, wrong payload length, order != lex, and non-finite values.
Volume3D load_volume(const std::string& base);

/// "name.volhdr" / "name.vol" -> "name"; anything else unchanged.
std::string strip_volume_extension(const std::string& path);

}  // namespace volsr
