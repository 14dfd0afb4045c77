#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string_view>

namespace fleetsim {

// FNV-1a over canonical event records; used for determinism replay checks.
class EventHash {
public:
    uint64_t value() const { return h_; }

    EventHash& mix(uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h_ ^= (v >> (8 * i)) & 0xffu;
            h_ *= 0x100000001b3ull;
        }
        return *this;
    }

    EventHash& mix(int v) { return mix(static_cast<uint64_t>(static_cast<int64_t>(v))); }

    EventHash& mix(double v) { return mix(std::bit_cast<uint64_t>(v)); }

    EventHash& mix(std::string_view s) {
        for (char c : s) {
            h_ ^= static_cast<unsigned char>(c);
            h_ *= 0x100000001b3ull;
        }
        return *this;
    }

private:
    uint64_t h_ = 1469598103934665603ull;
};

}  // namespace fleetsim
