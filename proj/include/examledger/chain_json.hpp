#pragma once

// JSON (de)serialization for ledger records. One chain entry per JSONL line;
// all byte strings are 0x-prefixed lowercase hex. Parsing is strict: any
// missing field, bad hex, or unknown enum name throws.

#include <json.hpp>

#include "examledger/types.hpp"

namespace examledger {

void to_json(nlohmann::json& j, const Transaction& tx);
void from_json(const nlohmann::json& j, Transaction& tx);

void to_json(nlohmann::json& j, const Event& ev);
void from_json(const nlohmann::json& j, Event& ev);

void to_json(nlohmann::json& j, const Receipt& r);
void from_json(const nlohmann::json& j, Receipt& r);

void to_json(nlohmann::json& j, const ChainEntry& e);
void from_json(const nlohmann::json& j, ChainEntry& e);

}  // namespace examledger
