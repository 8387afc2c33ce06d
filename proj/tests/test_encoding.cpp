#include <doctest.h>

#include "examledger/encoding.hpp"
#include "examledger/engine.hpp"
#include "support/fixtures.hpp"

using namespace examledger;

TEST_CASE("encoder/decoder round-trips every field type") {
  Address a = fixtures::addr(9);
  Hash256 h = keccak256(std::string_view("x"));
  std::vector<std::int64_t> list{-3, 0, 7, 1'000'000'007};

  Encoder e;
  e.u8(0xfe).u32(0xdeadbeef).u64(0x0123456789abcdefULL).i64(-42);
  e.address(a).hash(h).bytes(ByteSpan(Bytes{1, 2, 3})).str("hello").i64_list(list);

  Bytes buf = e.take();
  Decoder d{ByteSpan(buf)};
  CHECK(d.u8() == 0xfe);
  CHECK(d.u32() == 0xdeadbeef);
  CHECK(d.u64() == 0x0123456789abcdefULL);
  CHECK(d.i64() == -42);
  CHECK(d.address() == a);
  CHECK(d.hash() == h);
  CHECK(d.bytes() == Bytes{1, 2, 3});
  CHECK(d.str() == "hello");
  CHECK(d.i64_list() == list);
  CHECK_NOTHROW(d.expect_done());
}

TEST_CASE("integers encode big-endian fixed width") {
  Bytes buf = Encoder{}.u64(0x0102030405060708ULL).take();
  CHECK(buf == Bytes{1, 2, 3, 4, 5, 6, 7, 8});
  CHECK(Encoder{}.u32(0x0a0b0c0d).take() == Bytes{0x0a, 0x0b, 0x0c, 0x0d});
}

TEST_CASE("decoder rejects truncation and trailing bytes") {
  Bytes short_buf{1, 2, 3};
  Decoder d1{ByteSpan(short_buf)};
  CHECK_THROWS_AS(d1.u64(), DecodeError);

  Bytes trailing = Encoder{}.u8(7).u8(8).take();
  Decoder d2{ByteSpan(trailing)};
  d2.u8();
  CHECK_THROWS_AS(d2.expect_done(), DecodeError);

  // A length prefix pointing past the buffer must not read out of bounds.
  Bytes bad_len = Encoder{}.u32(100).take();
  Decoder d3{ByteSpan(bad_len)};
  CHECK_THROWS_AS(d3.bytes(), DecodeError);
}

TEST_CASE("transaction and receipt encodings are canonical") {
  Transaction tx;
  tx.seq = 5;
  tx.sender = fixtures::addr(1);
  tx.target_module = TargetModule::HASH_REGISTRY;
  tx.op_name = "registerScript";
  tx.payload = Bytes{9, 9};
  tx.timestamp = 1'755'000'000'123ULL;

  Transaction same = tx;
  CHECK(Engine::encode_tx(tx) == Engine::encode_tx(same));

  // Any single differing field must change the bytes.
  Transaction t2 = tx;
  t2.seq++;
  CHECK(Engine::encode_tx(tx) != Engine::encode_tx(t2));
  Transaction t3 = tx;
  t3.op_name = "registerScripT";
  CHECK(Engine::encode_tx(tx) != Engine::encode_tx(t3));
  Transaction t4 = tx;
  t4.payload.push_back(0);
  CHECK(Engine::encode_tx(tx) != Engine::encode_tx(t4));

  Receipt r;
  r.tx_seq = 5;
  r.status = TxStatus::REVERTED;
  r.revert_reason = "Unknown exam";
  r.gas_used = 23'100;
  r.state_root_hash = keccak256(std::string_view("root"));
  Receipt r_same = r;
  CHECK(Engine::encode_receipt(r) == Engine::encode_receipt(r_same));
  Receipt r2 = r;
  r2.gas_used++;
  CHECK(Engine::encode_receipt(r) != Engine::encode_receipt(r2));
  Receipt r3 = r;
  r3.events.push_back(Event{"X", {}, {}});
  CHECK(Engine::encode_receipt(r) != Engine::encode_receipt(r3));
}
