#include "sdgar/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <vector>

#include "sdgar/errors.hpp"
#include "sdgar/math.hpp"

namespace sdgar {

namespace {

constexpr char kMagic[8] = {'S', 'D', 'G', 'A', 'R', 'C', 'P', '1'};

void put_u64(std::vector<char>& buf, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) buf.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

std::uint64_t get_u64(const char* p) {
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[b])) << (8 * b);
  }
  return v;
}

void put_doubles(std::vector<char>& buf, const Real* data, std::size_t count) {
  const std::size_t offset = buf.size();
  buf.resize(offset + count * sizeof(Real));
  std::memcpy(buf.data() + offset, data, count * sizeof(Real));
}

}  // namespace

void save_checkpoint(const DiscriminatorParams& disc, const GeneratorParams& gen,
                     const std::string& path, std::uint64_t config_hash) {
  if (disc.num_contexts() != gen.num_contexts() ||
      disc.num_items() != gen.num_items()) {
    throw ShapeError("checkpoint: discriminator/generator size mismatch");
  }

  std::vector<char> body;
  put_u64(body, config_hash);
  put_u64(body, static_cast<std::uint64_t>(disc.num_contexts()));
  put_u64(body, static_cast<std::uint64_t>(disc.num_items()));
  put_u64(body, static_cast<std::uint64_t>(disc.dim()));
  put_u64(body, static_cast<std::uint64_t>(gen.num_states()));
  put_doubles(body, disc.context_emb.data(),
              static_cast<std::size_t>(disc.context_emb.size()));
  put_doubles(body, disc.item_emb.data(),
              static_cast<std::size_t>(disc.item_emb.size()));
  put_doubles(body, disc.item_bias.data(),
              static_cast<std::size_t>(disc.item_bias.size()));
  put_doubles(body, gen.X.data(), static_cast<std::size_t>(gen.X.size()));
  put_doubles(body, gen.Y.data(), static_cast<std::size_t>(gen.Y.size()));

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  std::vector<char> checksum;
  put_u64(checksum, fnv1a(body.data(), body.size()));
  out.write(checksum.data(), static_cast<std::streamsize>(checksum.size()));
  if (!out) throw IoError("write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());

  constexpr std::size_t kHeader = sizeof(kMagic) + 5 * 8;
  if (bytes.size() < kHeader + 8 ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw ParseError(path + ": not a checkpoint file");
  }

  const char* p = bytes.data() + sizeof(kMagic);
  const std::uint64_t config_hash = get_u64(p);
  const auto n = static_cast<Index>(get_u64(p + 8));
  const auto m = static_cast<Index>(get_u64(p + 16));
  const auto d = static_cast<Index>(get_u64(p + 24));
  const auto k = static_cast<Index>(get_u64(p + 32));

  const std::size_t doubles = static_cast<std::size_t>(
      n * d + m * d + m + n * k + m * k);
  const std::size_t expected = kHeader + doubles * sizeof(Real) + 8;
  if (bytes.size() != expected) {
    throw ShapeError(path + ": expected " + std::to_string(expected) +
                     " bytes for shape (" + std::to_string(n) + ", " +
                     std::to_string(m) + ", " + std::to_string(d) + ", " +
                     std::to_string(k) + "), got " +
                     std::to_string(bytes.size()));
  }

  const std::size_t body_len = bytes.size() - sizeof(kMagic) - 8;
  const std::uint64_t stored = get_u64(bytes.data() + bytes.size() - 8);
  const std::uint64_t actual = fnv1a(bytes.data() + sizeof(kMagic), body_len);
  if (stored != actual) {
    throw ChecksumError(path + ": checksum mismatch (file corrupted)");
  }

  Checkpoint ck;
  ck.config_hash = config_hash;
  ck.disc.context_emb.resize(n, d);
  ck.disc.item_emb.resize(m, d);
  ck.disc.item_bias.resize(m);
  ck.gen.X.resize(n, k);
  ck.gen.Y.resize(m, k);

  const char* data = bytes.data() + kHeader;
  auto read_block = [&data](Real* dst, std::size_t count) {
    std::memcpy(dst, data, count * sizeof(Real));
    data += count * sizeof(Real);
  };
  read_block(ck.disc.context_emb.data(), static_cast<std::size_t>(n * d));
  read_block(ck.disc.item_emb.data(), static_cast<std::size_t>(m * d));
  read_block(ck.disc.item_bias.data(), static_cast<std::size_t>(m));
  read_block(ck.gen.X.data(), static_cast<std::size_t>(n * k));
  read_block(ck.gen.Y.data(), static_cast<std::size_t>(m * k));
  return ck;
}

}  // namespace sdgar
