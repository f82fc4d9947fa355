#pragma once

#include "sltr/dataset.hpp"
#include "sltr/tensor.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace sltr::io {

// Binary layouts, all integers and reals little-endian:
//
//   tensor file:  "SLTRTN1\n"  u32 M  u64 dims[M]  f64 data[prod dims]
//   dataset file: "SLTRDS1\n"  u32 version(=1)  u32 M  u64 dims[M]  u64 N
//                 f64 samples[N][prod dims]  f64 y[N]
//
// Reals are IEEE-754 binary64, tensors in canonical (mode-0 fastest) order.

inline constexpr std::string_view kTensorMagic = "SLTRTN1\n";
inline constexpr std::string_view kDatasetMagic = "SLTRDS1\n";
inline constexpr std::uint32_t kDatasetVersion = 1;

std::vector<std::uint8_t> encode_tensor(const Tensor& t);
Tensor decode_tensor(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_dataset(const Dataset& ds);
Dataset decode_dataset(std::span<const std::uint8_t> bytes);

Tensor read_tensor(const std::filesystem::path& path);
void write_tensor(const Tensor& t, const std::filesystem::path& path);

Dataset read_dataset(const std::filesystem::path& path);
void write_dataset(const Dataset& ds, const std::filesystem::path& path);

}  // namespace sltr::io
