#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "besov/grid.hpp"
#include "besov/linalg.hpp"

namespace besov {

/// Binary grid-function format ("BSGF"), all fields little-endian:
///
///   "BSGF" | u32 version | u32 n | u32 N_1..N_n | f64 L_1..L_n |
///   u32 fiber_dim | u32 p_num | u32 p_den | (f64 re, f64 im) * d * prod N_k
///
/// p = inf is stored as 0/1. Values are fiber-major within a point and
/// row-major over points.
inline constexpr std::uint32_t kBsgfVersion = 1;

std::vector<std::uint8_t> encode_grid_function(const GridFunction& f);
GridFunction decode_grid_function(const std::vector<std::uint8_t>& bytes);

void write_grid_function(const GridFunction& f, const std::filesystem::path& path);
GridFunction read_grid_function(const std::filesystem::path& path);

/// A d x d matrix in the same container: one point (n = 1, N_1 = 1, L_1 = 1),
/// fiber dimension d * d, entries row-major.
std::vector<std::uint8_t> encode_matrix(const Matrix& m);
Matrix decode_matrix(const std::vector<std::uint8_t>& bytes);
void write_matrix(const Matrix& m, const std::filesystem::path& path);
Matrix read_matrix(const std::filesystem::path& path);

}  // namespace besov
