#include "stdpgen/model_io.hpp"

#include <zlib.h>

#include <array>
#include <bit>
#include <cstring>

#include "stdpgen/errors.hpp"

namespace stdpgen {

namespace {

constexpr std::array<char, 8> kMagic{'S', 'T', 'D', 'P', 'M', 'O', 'D', '1'};

static_assert(std::endian::native == std::endian::little, "model files assume a little-endian host");

class GzFile {
 public:
  GzFile(const std::filesystem::path& path, const char* mode) : path_(path.string()) {
    f_ = gzopen(path_.c_str(), mode);
    if (!f_) throw Error(ErrorCode::kIo, "cannot open " + path_);
  }
  ~GzFile() { gzclose(f_); }
  GzFile(const GzFile&) = delete;
  GzFile& operator=(const GzFile&) = delete;

  void write(const void* p, std::size_t n) {
    if (n && gzwrite(f_, p, static_cast<unsigned>(n)) != static_cast<int>(n))
      throw Error(ErrorCode::kIo, "write failed: " + path_);
  }
  void read(void* p, std::size_t n) {
    if (n && gzread(f_, p, static_cast<unsigned>(n)) != static_cast<int>(n))
      throw Error(ErrorCode::kDataFormat, path_ + ": truncated model file");
  }
  template <typename T>
  void put(const T& v) {
    write(&v, sizeof v);
  }
  template <typename T>
  T take() {
    T v{};
    read(&v, sizeof v);
    return v;
  }

 private:
  std::string path_;
  gzFile f_ = nullptr;
};

}  // namespace

TrainedModel capture_model(const Network& net, const ClassAssignment& assignment) {
  TrainedModel m;
  m.n_input = net.n_input();
  m.n_exc = net.n_exc();
  const auto w = net.input_weights().values();
  m.weights.assign(w.begin(), w.end());
  m.theta = net.excitatory().theta;
  m.assignment = assignment;
  return m;
}

Network restore_network(const NetworkConfig& cfg, const TrainedModel& model) {
  if (cfg.n_input != model.n_input || cfg.n_exc != model.n_exc)
    throw InvalidArgument("model is " + std::to_string(model.n_input) + "x" + std::to_string(model.n_exc) +
                          " but the config asks for " + std::to_string(cfg.n_input) + "x" + std::to_string(cfg.n_exc));
  Network net(cfg);
  auto w = net.input_weights().values();
  std::copy(model.weights.begin(), model.weights.end(), w.begin());
  net.excitatory().theta = model.theta;
  return net;
}

void save_model(const std::filesystem::path& path, const TrainedModel& m) {
  if (m.weights.size() != m.n_input * m.n_exc || m.theta.size() != m.n_exc || m.assignment.labels.size() != m.n_exc)
    throw InvalidArgument("save_model: inconsistent model dimensions");
  GzFile f(path, "wb6");
  f.write(kMagic.data(), kMagic.size());
  f.put<std::uint64_t>(m.n_input);
  f.put<std::uint64_t>(m.n_exc);
  f.write(m.weights.data(), m.weights.size() * sizeof(double));
  f.write(m.theta.data(), m.theta.size() * sizeof(double));
  f.write(m.assignment.labels.data(), m.assignment.labels.size());
}

TrainedModel load_model(const std::filesystem::path& path) {
  GzFile f(path, "rb");
  std::array<char, 8> magic{};
  f.read(magic.data(), magic.size());
  if (magic != kMagic) throw Error(ErrorCode::kDataFormat, path.string() + ": not a model file");
  TrainedModel m;
  m.n_input = f.take<std::uint64_t>();
  m.n_exc = f.take<std::uint64_t>();
  if (m.n_input == 0 || m.n_exc == 0 || m.n_input > (1u << 20) || m.n_exc > (1u << 20))
    throw Error(ErrorCode::kDataFormat, path.string() + ": implausible model dimensions");
  m.weights.resize(m.n_input * m.n_exc);
  m.theta.resize(m.n_exc);
  m.assignment.labels.resize(m.n_exc);
  f.read(m.weights.data(), m.weights.size() * sizeof(double));
  f.read(m.theta.data(), m.theta.size() * sizeof(double));
  f.read(m.assignment.labels.data(), m.assignment.labels.size());
  for (auto l : m.assignment.labels)
    if (l >= kNumClasses) throw Error(ErrorCode::kDataFormat, path.string() + ": class label out of range");
  return m;
}

}  // namespace stdpgen
