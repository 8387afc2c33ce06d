#include "examledger/chain_json.hpp"

#include <stdexcept>

namespace examledger {

namespace {

Bytes hex_field(const nlohmann::json& j, const char* key) {
  auto parsed = from_hex(j.at(key).get<std::string>());
  if (!parsed) throw std::invalid_argument(std::string("bad hex in field ") + key);
  return *parsed;
}

Hash256 hash_field(const nlohmann::json& j, const char* key) {
  auto parsed = parse_hash(j.at(key).get<std::string>());
  if (!parsed) throw std::invalid_argument(std::string("bad hash in field ") + key);
  return *parsed;
}

Address address_field(const nlohmann::json& j, const char* key) {
  auto parsed = Address::parse(j.at(key).get<std::string>());
  if (!parsed) throw std::invalid_argument(std::string("bad address in field ") + key);
  return *parsed;
}

}  // namespace

void to_json(nlohmann::json& j, const Transaction& tx) {
  j = nlohmann::json{
      {"seq", tx.seq},
      {"sender", tx.sender.hex()},
      {"module", std::string(to_string(tx.target_module))},
      {"op", tx.op_name},
      {"payload", to_hex0x(ByteSpan(tx.payload))},
      {"timestamp", tx.timestamp},
  };
}

void from_json(const nlohmann::json& j, Transaction& tx) {
  tx.seq = j.at("seq").get<std::uint64_t>();
  tx.sender = address_field(j, "sender");
  auto module = parse_module(j.at("module").get<std::string>());
  if (!module) throw std::invalid_argument("unknown module name");
  tx.target_module = *module;
  tx.op_name = j.at("op").get<std::string>();
  tx.payload = hex_field(j, "payload");
  tx.timestamp = j.at("timestamp").get<std::uint64_t>();
}

void to_json(nlohmann::json& j, const Event& ev) {
  nlohmann::json topics = nlohmann::json::array();
  for (const auto& t : ev.topics) topics.push_back(hash_hex(t));
  j = nlohmann::json{
      {"name", ev.name},
      {"topics", std::move(topics)},
      {"data", to_hex0x(ByteSpan(ev.data))},
  };
}

void from_json(const nlohmann::json& j, Event& ev) {
  ev.name = j.at("name").get<std::string>();
  ev.topics.clear();
  for (const auto& t : j.at("topics")) {
    auto parsed = parse_hash(t.get<std::string>());
    if (!parsed) throw std::invalid_argument("bad hash in event topic");
    ev.topics.push_back(*parsed);
  }
  ev.data = hex_field(j, "data");
}

void to_json(nlohmann::json& j, const Receipt& r) {
  j = nlohmann::json{
      {"tx_seq", r.tx_seq},
      {"status", r.status == TxStatus::SUCCESS ? "SUCCESS" : "REVERTED"},
      {"revert_reason", r.revert_reason},
      {"gas_used", r.gas_used},
      {"events", r.events},
      {"state_root", hash_hex(r.state_root_hash)},
  };
}

void from_json(const nlohmann::json& j, Receipt& r) {
  r.tx_seq = j.at("tx_seq").get<std::uint64_t>();
  auto status = j.at("status").get<std::string>();
  if (status == "SUCCESS") {
    r.status = TxStatus::SUCCESS;
  } else if (status == "REVERTED") {
    r.status = TxStatus::REVERTED;
  } else {
    throw std::invalid_argument("unknown receipt status");
  }
  r.revert_reason = j.at("revert_reason").get<std::string>();
  r.gas_used = j.at("gas_used").get<std::uint64_t>();
  r.events = j.at("events").get<std::vector<Event>>();
  r.state_root_hash = hash_field(j, "state_root");
}

void to_json(nlohmann::json& j, const ChainEntry& e) {
  j = nlohmann::json{
      {"tx", e.tx},
      {"receipt", e.receipt},
      {"entry_hash", hash_hex(e.entry_hash)},
  };
}

void from_json(const nlohmann::json& j, ChainEntry& e) {
  e.tx = j.at("tx").get<Transaction>();
  e.receipt = j.at("receipt").get<Receipt>();
  e.entry_hash = hash_field(j, "entry_hash");
}

}  // namespace examledger
