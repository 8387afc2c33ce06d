#include "examledger/execution.hpp"

#include "examledger/keccak.hpp"

namespace examledger {

Hash256 ExecutionContext::keccak(ByteSpan data) {
  meter_.charge(schedule_.hash_word * ((data.size() + 31) / 32));
  return keccak256(data);
}

}  // namespace examledger
