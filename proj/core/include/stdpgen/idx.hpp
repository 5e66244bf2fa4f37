#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "stdpgen/encoding.hpp"

namespace stdpgen {

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

/// Row-major unsigned-byte images as stored in an IDX3 file.
struct IdxImages {
  std::size_t count = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> pixels;

  const std::uint8_t* image(std::size_t i) const { return pixels.data() + i * rows * cols; }
};

/// Plain or gzip-compressed IDX3 image file; images must be 28x28.
IdxImages load_idx_images(const std::filesystem::path& path);

/// Plain or gzip-compressed IDX1 label file; every label must be <= 9.
std::vector<std::uint8_t> load_idx_labels(const std::filesystem::path& path);

void write_idx_images(const std::filesystem::path& path, const IdxImages& images);
void write_idx_labels(const std::filesystem::path& path, const std::vector<std::uint8_t>& labels);

enum class DatasetName { kMnist, kFashionMnist };
enum class Split { kTrain, kTest };

std::string to_string(DatasetName name);
DatasetName parse_dataset_name(const std::string& s);

struct Dataset {
  DatasetName name = DatasetName::kMnist;
  Split split = Split::kTrain;
  std::vector<ImageSample> samples;

  std::size_t size() const noexcept { return samples.size(); }
};

/// Loads `{train,t10k}-{images-idx3,labels-idx1}-ubyte[.gz]` from `dir`.
/// Samples keep file order.
Dataset load_dataset(const std::filesystem::path& dir, DatasetName name, Split split);

/// Environment variable naming the default dataset root. The dataset itself
/// lives in `<root>/mnist` or `<root>/fashion`.
inline constexpr const char* kDataDirEnv = "STDPGEN_DATA_DIR";

/// $STDPGEN_DATA_DIR/<name>, else ./data/<name>.
std::filesystem::path default_dataset_dir(DatasetName name);

}  // namespace stdpgen
