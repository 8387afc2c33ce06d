#include "examledger/keccak.hpp"

#include <bit>
#include <cstring>

namespace examledger {
namespace {

constexpr std::uint64_t kRoundConstants[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL,
    0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL,
    0x8000000080008081ULL, 0x8000000000008009ULL, 0x000000000000008aULL,
    0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL,
    0x8000000000008003ULL, 0x8000000000008002ULL, 0x8000000000000080ULL,
    0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL,
    0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

// Rotation offsets indexed [x][y].
constexpr int kRho[5][5] = {
    {0, 36, 3, 41, 18},
    {1, 44, 10, 45, 2},
    {62, 6, 43, 15, 61},
    {28, 55, 25, 21, 56},
    {27, 20, 39, 8, 14},
};

void keccak_f1600(std::uint64_t a[5][5]) {
  for (int round = 0; round < 24; ++round) {
    // theta
    std::uint64_t c[5], d[5];
    for (int x = 0; x < 5; ++x)
      c[x] = a[x][0] ^ a[x][1] ^ a[x][2] ^ a[x][3] ^ a[x][4];
    for (int x = 0; x < 5; ++x)
      d[x] = c[(x + 4) % 5] ^ std::rotl(c[(x + 1) % 5], 1);
    for (int x = 0; x < 5; ++x)
      for (int y = 0; y < 5; ++y) a[x][y] ^= d[x];

    // rho + pi
    std::uint64_t b[5][5];
    for (int x = 0; x < 5; ++x)
      for (int y = 0; y < 5; ++y)
        b[y][(2 * x + 3 * y) % 5] = std::rotl(a[x][y], kRho[x][y]);

    // chi
    for (int x = 0; x < 5; ++x)
      for (int y = 0; y < 5; ++y)
        a[x][y] = b[x][y] ^ (~b[(x + 1) % 5][y] & b[(x + 2) % 5][y]);

    // iota
    a[0][0] ^= kRoundConstants[round];
  }
}

constexpr std::size_t kRate = 136;  // 1088-bit rate for 256-bit output

}  // namespace

Hash256 keccak256(ByteSpan data) {
  std::uint64_t state[5][5] = {};
  std::uint8_t block[kRate];

  std::size_t offset = 0;
  auto absorb_block = [&](const std::uint8_t* p) {
    for (std::size_t i = 0; i < kRate / 8; ++i) {
      std::uint64_t lane;
      std::memcpy(&lane, p + i * 8, 8);
      if constexpr (std::endian::native == std::endian::big) lane = __builtin_bswap64(lane);
      state[i % 5][i / 5] ^= lane;
    }
    keccak_f1600(state);
  };

  while (data.size() - offset >= kRate) {
    absorb_block(data.data() + offset);
    offset += kRate;
  }

  // final block: pad10*1, domain byte 0x01
  const std::size_t tail = data.size() - offset;
  std::memset(block, 0, kRate);
  if (tail > 0) std::memcpy(block, data.data() + offset, tail);
  block[tail] = 0x01;
  block[kRate - 1] ^= 0x80;
  absorb_block(block);

  Hash256 out;
  for (std::size_t i = 0; i < 4; ++i) {
    std::uint64_t lane = state[i % 5][i / 5];
    if constexpr (std::endian::native == std::endian::big) lane = __builtin_bswap64(lane);
    std::memcpy(out.data() + i * 8, &lane, 8);
  }
  return out;
}

}  // namespace examledger
