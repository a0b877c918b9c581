#include <zlib.h>

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "precut/error.hpp"
#include "precut/store.hpp"

namespace precut::store {

std::uint32_t crc32_bytes(std::span<const std::uint8_t> bytes, std::uint32_t crc) {
  uLong c = crc;
  // zlib takes uInt lengths; feed large buffers in chunks.
  std::size_t off = 0;
  while (off < bytes.size()) {
    const auto n = static_cast<uInt>(std::min<std::size_t>(bytes.size() - off, 1u << 30));
    c = ::crc32(c, bytes.data() + off, n);
    off += n;
  }
  return static_cast<std::uint32_t>(c);
}

std::uint32_t crc32_text(std::string_view text, std::uint32_t crc) {
  return crc32_bytes(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()), crc);
}

std::uint32_t crc32_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::vector<char> buf(1 << 16);
  std::uint32_t crc = 0;
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const auto got = static_cast<std::size_t>(in.gcount());
    crc = crc32_bytes(std::span(reinterpret_cast<const std::uint8_t*>(buf.data()), got), crc);
  }
  return crc;
}

std::string hex32(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

}  // namespace precut::store
