#include "nematic/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "nematic/errors.hpp"

namespace nematic {

namespace {

constexpr char kMagic[] = "NEMF1\n";
constexpr std::size_t kMagicLen = 6;

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& out, double x) {
  const auto v = std::bit_cast<std::uint64_t>(x);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(const std::vector<unsigned char>& b) : b_(b) {}

  void need(std::size_t count, const char* what) const {
    if (b_.size() - pos_ < count) throw IoError(std::string("truncated snapshot while reading ") + what);
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(v);
  }
  std::string bytes(std::size_t count, const char* what) {
    need(count, what);
    std::string s(b_.begin() + static_cast<std::ptrdiff_t>(pos_), b_.begin() + static_cast<std::ptrdiff_t>(pos_ + count));
    pos_ += count;
    return s;
  }
  std::size_t remaining() const { return b_.size() - pos_; }

 private:
  const std::vector<unsigned char>& b_;
  std::size_t pos_ = 0;
};

Snapshot decode(const std::vector<unsigned char>& bytes, bool header_only) {
  Reader r(bytes);
  if (r.bytes(kMagicLen, "magic") != std::string(kMagic, kMagicLen)) throw IoError("not a NEMF1 snapshot (bad magic)");
  Snapshot s;
  const std::uint32_t dim = r.u32("dim");
  if (dim < 1 || dim > 3) throw IoError("snapshot dim must be 1..3, got " + std::to_string(dim));
  for (std::uint32_t a = 0; a < dim; ++a) s.n.push_back(r.u32("n"));
  const std::uint32_t count = r.u32("field_count");
  for (std::uint32_t f = 0; f < count; ++f) {
    SnapshotField field;
    const std::uint32_t len = r.u32("name_length");
    field.name = r.bytes(len, "field name");
    field.components = r.u32("components");
    s.fields.push_back(std::move(field));
  }
  if (header_only) return s;
  const std::size_t points = s.points();
  for (auto& field : s.fields) {
    const std::size_t values = points * field.components;
    r.need(values * 8, "field data");
    field.data.resize(values);
    for (double& x : field.data) x = r.f64();
  }
  if (r.remaining() != 0) throw IoError("trailing bytes after snapshot data");
  return s;
}

std::vector<unsigned char> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read snapshot '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::size_t Snapshot::points() const {
  std::size_t p = 1;
  for (auto v : n) p *= v;
  return p;
}

const SnapshotField* Snapshot::find(const std::string& name) const {
  for (const auto& f : fields)
    if (f.name == name) return &f;
  return nullptr;
}

std::vector<unsigned char> encode_snapshot(const Snapshot& s) {
  std::vector<unsigned char> out(kMagic, kMagic + kMagicLen);
  put_u32(out, s.dim());
  for (auto v : s.n) put_u32(out, v);
  put_u32(out, static_cast<std::uint32_t>(s.fields.size()));
  for (const auto& f : s.fields) {
    put_u32(out, static_cast<std::uint32_t>(f.name.size()));
    out.insert(out.end(), f.name.begin(), f.name.end());
    put_u32(out, f.components);
  }
  const std::size_t points = s.points();
  for (const auto& f : s.fields) {
    if (f.data.size() != points * f.components)
      throw IoError("snapshot field '" + f.name + "' has " + std::to_string(f.data.size()) + " values, expected " +
                    std::to_string(points * f.components));
    for (double x : f.data) put_f64(out, x);
  }
  return out;
}

Snapshot decode_snapshot(const std::vector<unsigned char>& bytes) { return decode(bytes, false); }

void write_snapshot(const std::string& path, const Snapshot& s) {
  const auto bytes = encode_snapshot(s);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

Snapshot read_snapshot(const std::string& path) { return decode(slurp(path), false); }

Snapshot read_snapshot_header(const std::string& path) { return decode(slurp(path), true); }

Snapshot snapshot_of(const StepState& state, const std::vector<std::pair<std::string, const VectorField*>>& extra) {
  const GridSpec& grid = state.d.grid();
  Snapshot s;
  s.n.assign(static_cast<std::size_t>(grid.dim()), static_cast<std::uint32_t>(grid.n()));
  auto add = [&](const std::string& name, const VectorField& f) {
    if (f.level() != Level::base) throw IoError("snapshot field '" + name + "' must be on the base lattice");
    s.fields.push_back({name, static_cast<std::uint32_t>(f.components()), f.data()});
  };
  add("d", state.d);
  add("u", state.u);
  for (const auto& [name, f] : extra) add(name, *f);
  return s;
}

}  // namespace nematic
