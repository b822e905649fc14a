#include "ncauth/psd.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>
#include <vector>

namespace ncauth {

void PsdInstance::validate() const {
    const auto& desc = base.descriptor();
    if (!(middle.descriptor() == desc) || !(target.descriptor() == desc)) {
        throw DescriptorMismatch();
    }
    if (left_exponent < 1 || right_exponent < 1) {
        throw std::invalid_argument("decomposition exponents must be >= 1");
    }
}

bool check_decomposition(const PsdInstance& inst, const RingElement& z) {
    if (!(z.descriptor() == inst.target.descriptor())) {
        throw DescriptorMismatch();
    }
    return sandwich(z, inst.middle, inst.left_exponent, inst.right_exponent) == inst.target;
}

std::optional<PsdSolution> brute_force_psd(const PsdInstance& inst, const PsdSearchOptions& opts) {
    inst.validate();
    const PolynomialEnumerator polys(opts.max_degree, opts.max_coefficient, opts.budget);
    constexpr auto kNone = std::numeric_limits<std::uint64_t>::max();
    std::atomic<std::uint64_t> best{kNone};

    auto scan = [&](std::uint64_t begin, std::uint64_t end) {
        auto cursor = polys.cursor(begin, end);
        for (std::uint64_t index = begin; index < end; ++index) {
            auto g = cursor.next();
            if (index > best.load(std::memory_order_relaxed)) {
                return;
            }
            if (check_decomposition(inst, evaluate(*g, inst.base))) {
                std::uint64_t seen = best.load();
                while (index < seen && !best.compare_exchange_weak(seen, index)) {
                }
                return;
            }
        }
    };

    const std::uint64_t workers = std::clamp<std::uint64_t>(opts.workers, 1, std::max<std::uint64_t>(1, polys.size()));
    if (workers == 1) {
        scan(0, polys.size());
    } else {
        std::vector<std::jthread> pool;
        const std::uint64_t chunk = (polys.size() + workers - 1) / workers;
        for (std::uint64_t w = 0; w < workers; ++w) {
            const std::uint64_t begin = w * chunk;
            const std::uint64_t end = std::min(polys.size(), begin + chunk);
            if (begin < end) pool.emplace_back(scan, begin, end);
        }
    }

    const std::uint64_t hit = best.load();
    if (hit == kNone) {
        return std::nullopt;
    }
    PsdSolution solution{polys.at(hit), RingElement::zero(inst.base.descriptor())};
    solution.witness_element = evaluate(solution.witness_poly, inst.base);
    if (!check_decomposition(inst, solution.witness_element)) {
        throw std::logic_error("brute_force_psd produced a non-verifying witness");
    }
    return solution;
}

std::pair<PsdInstance, PsdSolution> generate_planted_instance(const RingDescriptor& desc,
                                                              std::uint32_t left_exponent,
                                                              std::uint32_t right_exponent,
                                                              const PolynomialSamplerConfig& cfg,
                                                              RandomSource& rng) {
    auto base = random_element(desc, rng);
    auto middle = random_element(desc, rng);
    auto g = sample_polynomial(cfg, base, rng);
    auto z = evaluate(g, base);
    auto target = sandwich(z, middle, left_exponent, right_exponent);
    PsdInstance inst{std::move(base), std::move(middle), std::move(target), left_exponent, right_exponent};
    inst.validate();
    return {std::move(inst), PsdSolution{std::move(g), std::move(z)}};
}

Bytes encode_instance(const PsdInstance& inst) {
    Bytes out;
    put_bytes(out, encode_element(inst.base));
    put_bytes(out, encode_element(inst.middle));
    put_bytes(out, encode_element(inst.target));
    put_u32(out, inst.left_exponent);
    put_u32(out, inst.right_exponent);
    return out;
}

PsdInstance decode_instance(std::span<const std::uint8_t> bytes) {
    ByteReader<DecodeError> in(bytes, "PSD instance");
    // the header of the first element fixes the size of all three
    if (bytes.size() < 10) {
        throw DecodeError("PSD instance: truncated input");
    }
    const std::size_t d = bytes[5];
    const std::size_t element_size = 10 + 4 * d * d;
    auto base = decode_element(in.take(element_size));
    auto middle = decode_element(in.take(element_size));
    auto target = decode_element(in.take(element_size));
    const auto left = in.u32();
    const auto right = in.u32();
    if (!in.done()) {
        throw DecodeError("PSD instance: trailing bytes");
    }
    PsdInstance inst{std::move(base), std::move(middle), std::move(target), left, right};
    try {
        inst.validate();
    } catch (const std::invalid_argument& e) {
        throw DecodeError(std::string("PSD instance: ") + e.what());
    }
    return inst;
}

}  // namespace ncauth
