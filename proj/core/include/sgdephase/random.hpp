#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sgdephase {

/// Engine for one independent random stream. The stream is a pure function of
/// (seed, key...), so a shot's noise does not depend on which thread draws it.
std::mt19937_64 make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> key);

}  // namespace sgdephase
