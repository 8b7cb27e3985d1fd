#include "defect_forge/complexity.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace defect_forge {

namespace {

constexpr char kMagic[4] = {'I', 'C', 'T', '1'};
constexpr std::uint8_t kVersion = 1;
constexpr std::size_t kHeaderSize = 4 + 1 + 8;

void append_u64_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t read_u64_le(const char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  return v;
}

}  // namespace

std::string serialize_table(const ComplexityTable& table) {
  std::string out;
  out.reserve(kHeaderSize + table.limit());
  out.append(kMagic, 4);
  out.push_back(static_cast<char>(kVersion));
  append_u64_le(out, table.limit());
  out.append(reinterpret_cast<const char*>(table.values().data()) + 1, table.limit());
  return out;
}

ComplexityTable parse_table(std::string_view bytes) {
  if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw std::runtime_error("table cache: bad magic");
  if (static_cast<std::uint8_t>(bytes[4]) != kVersion)
    throw std::runtime_error("table cache: unsupported format version");
  std::uint64_t limit = read_u64_le(bytes.data() + 5);
  if (limit == 0) throw std::runtime_error("table cache: zero limit");
  if (bytes.size() != kHeaderSize + limit)
    throw std::runtime_error("table cache: length mismatch");

  std::vector<std::uint8_t> values(limit + 1, 0);
  std::memcpy(values.data() + 1, bytes.data() + kHeaderSize, limit);
  ComplexityTable table(limit, std::move(values));

  // Spot checks on the smallest entries.
  static constexpr unsigned expected[] = {0, 1, 2, 3};
  for (std::uint64_t n = 1; n <= 3 && n <= limit; ++n)
    if (table[n] != expected[n])
      throw std::runtime_error("table cache: spot check failed at n=" + std::to_string(n));
  return table;
}

void save_table(const ComplexityTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  std::string bytes = serialize_table(table);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ComplexityTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open table cache: " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_table(bytes);
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace defect_forge
