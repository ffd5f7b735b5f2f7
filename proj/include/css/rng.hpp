/*
 * Copyright 2026 The ocss Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CSS_RNG_HPP
#define CSS_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace css {

// Seeded mt19937_64 with portable derived draws.  uniform_real_distribution
// and std::shuffle are implementation-defined, so the mappings below are
// spelled out to keep results bit-identical across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    std::uint64_t below(std::uint64_t bound) {
        // Debiased modulo draw.
        std::uint64_t threshold = (~bound + 1) % bound;  // 2^64 mod bound
        for (;;) {
            std::uint64_t r = gen_();
            if (r >= threshold) return r % bound;
        }
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace css

#endif
