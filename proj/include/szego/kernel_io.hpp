#pragma once

#include <iosfwd>
#include <string>

#include "szego/kernels.hpp"

namespace szego {

inline constexpr int kernel_format_version = 1;

/// Text format: one JSON header line (d, n, b, h, R0, grid, aliasing_period,
/// basis, manifest) followed by one CSV row per lattice site holding the
/// lattice coordinates and the interleaved real and imaginary parts of the
/// row-major matrix entries in %.17g, so reading restores the table bit for bit.
void write_kernel_table(const KernelTable& table, std::ostream& out, const std::string& manifest = "");
KernelTable read_kernel_table(std::istream& in);

void save_kernel_table(const KernelTable& table, const std::string& path, const std::string& manifest = "");
KernelTable load_kernel_table(const std::string& path);

} // namespace szego
