#include "stdpgen/idx.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <memory>

#include "stdpgen/errors.hpp"

namespace stdpgen {

namespace {

// gzread passes plain files through unchanged, so one reader covers both.
class GzReader {
 public:
  explicit GzReader(const std::filesystem::path& path) : path_(path.string()) {
    file_ = gzopen(path_.c_str(), "rb");
    if (!file_) throw IdxError(IdxError::Kind::kUnreadable, "cannot open " + path_);
  }
  ~GzReader() { gzclose(file_); }
  GzReader(const GzReader&) = delete;
  GzReader& operator=(const GzReader&) = delete;

  std::size_t read(void* dst, std::size_t n) {
    std::size_t total = 0;
    auto* out = static_cast<unsigned char*>(dst);
    while (total < n) {
      const auto chunk = static_cast<unsigned>(std::min<std::size_t>(n - total, 1u << 30));
      const int got = gzread(file_, out + total, chunk);
      if (got < 0) {
        int errnum = 0;
        const char* msg = gzerror(file_, &errnum);
        throw IdxError(IdxError::Kind::kTruncated, path_ + ": " + (msg ? msg : "read error"));
      }
      if (got == 0) break;
      total += static_cast<std::size_t>(got);
    }
    return total;
  }

  std::uint32_t read_be32(const char* what) {
    std::array<unsigned char, 4> b{};
    if (read(b.data(), 4) != 4) throw IdxError(IdxError::Kind::kTruncated, path_ + ": truncated header (" + what + ")");
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
  }

  void read_exact(std::vector<std::uint8_t>& out, std::size_t n) {
    // Grow in chunks so a lying header cannot force a huge allocation up front.
    constexpr std::size_t kChunk = 1u << 22;
    out.clear();
    while (out.size() < n) {
      const std::size_t want = std::min(kChunk, n - out.size());
      const std::size_t old = out.size();
      out.resize(old + want);
      const std::size_t got = read(out.data() + old, want);
      if (got != want)
        throw IdxError(IdxError::Kind::kTruncated, path_ + ": expected " + std::to_string(n) + " payload bytes, got " +
                                                       std::to_string(old + got));
    }
  }

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  gzFile file_ = nullptr;
};

void check_magic(GzReader& in, std::uint32_t expected) {
  const std::uint32_t magic = in.read_be32("magic");
  if (magic != expected) {
    char buf[64];
    std::snprintf(buf, sizeof buf, ": bad magic 0x%08x (expected 0x%08x)", magic, expected);
    throw IdxError(IdxError::Kind::kBadMagic, in.path() + buf);
  }
}

class GzWriter {
 public:
  explicit GzWriter(const std::filesystem::path& path) : path_(path.string()) {
    const bool gz = path.extension() == ".gz";
    file_ = gzopen(path_.c_str(), gz ? "wb9" : "wbT");
    if (!file_) throw IdxError(IdxError::Kind::kUnreadable, "cannot write " + path_);
  }
  ~GzWriter() { gzclose(file_); }
  GzWriter(const GzWriter&) = delete;
  GzWriter& operator=(const GzWriter&) = delete;

  void write(const void* src, std::size_t n) {
    if (n == 0) return;
    if (gzwrite(file_, src, static_cast<unsigned>(n)) != static_cast<int>(n))
      throw Error(ErrorCode::kIo, "write failed: " + path_);
  }
  void write_be32(std::uint32_t v) {
    const std::array<unsigned char, 4> b{static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
                                         static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
    write(b.data(), 4);
  }

 private:
  std::string path_;
  gzFile file_ = nullptr;
};

std::filesystem::path resolve(const std::filesystem::path& dir, const std::string& stem) {
  const auto plain = dir / stem;
  if (std::filesystem::exists(plain)) return plain;
  auto gz = plain;
  gz += ".gz";
  if (std::filesystem::exists(gz)) return gz;
  throw IdxError(IdxError::Kind::kUnreadable, "missing " + plain.string() + "[.gz]");
}

}  // namespace

IdxImages load_idx_images(const std::filesystem::path& path) {
  GzReader in(path);
  check_magic(in, kIdxImageMagic);
  IdxImages out;
  out.count = in.read_be32("count");
  out.rows = in.read_be32("rows");
  out.cols = in.read_be32("cols");
  if (out.rows != kImageSide || out.cols != kImageSide)
    throw IdxError(IdxError::Kind::kBadDimensions, in.path() + ": images are " + std::to_string(out.rows) + "x" +
                                                       std::to_string(out.cols) + ", expected 28x28");
  in.read_exact(out.pixels, out.count * out.rows * out.cols);
  return out;
}

std::vector<std::uint8_t> load_idx_labels(const std::filesystem::path& path) {
  GzReader in(path);
  check_magic(in, kIdxLabelMagic);
  const std::size_t count = in.read_be32("count");
  std::vector<std::uint8_t> labels;
  in.read_exact(labels, count);
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] > 9)
      throw IdxError(IdxError::Kind::kBadLabel,
                     in.path() + ": label " + std::to_string(labels[i]) + " at index " + std::to_string(i));
  return labels;
}

void write_idx_images(const std::filesystem::path& path, const IdxImages& images) {
  if (images.pixels.size() != images.count * images.rows * images.cols)
    throw InvalidArgument("write_idx_images: pixel buffer does not match count x rows x cols");
  GzWriter out(path);
  out.write_be32(kIdxImageMagic);
  out.write_be32(static_cast<std::uint32_t>(images.count));
  out.write_be32(static_cast<std::uint32_t>(images.rows));
  out.write_be32(static_cast<std::uint32_t>(images.cols));
  out.write(images.pixels.data(), images.pixels.size());
}

void write_idx_labels(const std::filesystem::path& path, const std::vector<std::uint8_t>& labels) {
  GzWriter out(path);
  out.write_be32(kIdxLabelMagic);
  out.write_be32(static_cast<std::uint32_t>(labels.size()));
  out.write(labels.data(), labels.size());
}

std::string to_string(DatasetName name) { return name == DatasetName::kMnist ? "mnist" : "fashion"; }

DatasetName parse_dataset_name(const std::string& s) {
  if (s == "mnist") return DatasetName::kMnist;
  if (s == "fashion" || s == "fashion-mnist") return DatasetName::kFashionMnist;
  throw InvalidArgument("unknown dataset '" + s + "' (expected mnist or fashion)");
}

Dataset load_dataset(const std::filesystem::path& dir, DatasetName name, Split split) {
  const std::string prefix = split == Split::kTrain ? "train" : "t10k";
  const auto images = load_idx_images(resolve(dir, prefix + "-images-idx3-ubyte"));
  const auto labels = load_idx_labels(resolve(dir, prefix + "-labels-idx1-ubyte"));
  if (images.count != labels.size())
    throw IdxError(IdxError::Kind::kBadDimensions, dir.string() + ": " + std::to_string(images.count) + " images but " +
                                                       std::to_string(labels.size()) + " labels");
  Dataset ds{name, split, {}};
  ds.samples.reserve(images.count);
  const std::size_t px = images.rows * images.cols;
  for (std::size_t i = 0; i < images.count; ++i) {
    const auto* p = images.image(i);
    ds.samples.push_back({std::vector<float>(p, p + px), labels[i]});
  }
  return ds;
}

std::filesystem::path default_dataset_dir(DatasetName name) {
  const char* env = std::getenv(kDataDirEnv);
  const std::filesystem::path root = env && *env ? std::filesystem::path(env) : std::filesystem::path("data");
  return root / to_string(name);
}

}  // namespace stdpgen
