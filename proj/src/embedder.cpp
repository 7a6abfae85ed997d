#include "fuzzymark/embedder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fuzzymark/error.hpp"
#include "fuzzymark/metrics.hpp"

namespace fuzzymark {

namespace {

void check_params(const EmbedParams& params) {
    if (params.tau < 1) throw Error(ErrorKind::Parameter, "tau must be at least 1");
    if (params.levels < 1) throw Error(ErrorKind::Parameter, "levels must be at least 1");
    if (params.subband.level > params.levels)
        throw Error(ErrorKind::Parameter, "subband " + params.subband.to_string() + " needs at least " +
                                              std::to_string(params.subband.level) + " levels");
    if (params.subband.orientation == Orientation::LL && params.subband.level != params.levels)
        throw Error(ErrorKind::Parameter, "LL subband exists only at the coarsest level");
}

std::size_t linear(const Coord& c, int cols) {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c.col);
}

Extraction extract_from_pyramid(const WaveletPyramid& pyramid, const WatermarkKey& key) {
    CoeffWindow window = pyramid.subband(key.params.subband);
    const CastingLayout layout = casting_layout(key.n, key.params.tau);

    std::vector<double> raw_sorted(static_cast<std::size_t>(key.n));
    std::vector<std::uint8_t> bits_sorted(static_cast<std::size_t>(key.n));
    auto magnitude = [&](int sorted_index) {
        const Coord& c = key.positions[sorted_index];
        return std::abs(window(c.row, c.col));
    };

    std::size_t index = 0;
    for (const CastingBlock& block : layout.blocks) {
        const double baseline = (magnitude(block.lower_ref) + magnitude(block.upper_ref)) / 2.0;
        for (int j = block.first_data; j < block.first_data + block.data_count; ++j, ++index) {
            raw_sorted[index] = (magnitude(j) - baseline) / key.v[index];
            bits_sorted[index] = raw_sorted[index] >= 0.5 ? 1 : 0;
        }
    }

    std::vector<double> raw(static_cast<std::size_t>(key.n));
    for (std::size_t i = 0; i < raw_sorted.size(); ++i) raw[key.wm_perm[i]] = raw_sorted[i];
    return {unsort_watermark(bits_sorted, key.wm_perm, key.wm_width, key.wm_height), std::move(raw)};
}

void check_image_dims(int width, int height, const WatermarkKey& key) {
    if (width != key.img_width || height != key.img_height)
        throw Error(ErrorKind::DimensionMismatch, "image is " + std::to_string(width) + "x" + std::to_string(height) +
                                                      " but the key was made for " + std::to_string(key.img_width) +
                                                      "x" + std::to_string(key.img_height));
}

// Integer refinement of a rounded reconstruction: single grey-level steps are
// accepted when they lower the summed squared read-out error (raw - bit)^2 of
// every data coefficient, references included through their bracket midpoints.
class ReadoutRefiner {
public:
    ReadoutRefiner(const WatermarkKey& key, const std::vector<double>& targets, const BasisFootprint& footprint)
        : key_(key), footprint_(footprint), layout_(casting_layout(key.n, key.params.tau)) {
        const Rect rect = subband_rect(key.img_width, key.img_height, key.params.levels, key.params.subband);
        rows_ = rect.rows;
        cols_ = rect.cols;
        stride_ = footprint.stride;
        key_at_.assign(static_cast<std::size_t>(rect.count()), -1);
        for (std::size_t k = 0; k < key.positions.size(); ++k)
            key_at_[linear(key.positions[k], cols_)] = static_cast<int>(k);

        // Role of each key position: data slot (casting order) or the blocks it brackets.
        const std::size_t p = key.positions.size();
        data_slot_.assign(p, -1);
        block_of_slot_.assign(static_cast<std::size_t>(key.n), 0);
        ref_blocks_.assign(p, {});
        offset_.assign(static_cast<std::size_t>(key.n), 0.0);
        int slot = 0;
        for (std::size_t b = 0; b < layout_.blocks.size(); ++b) {
            const CastingBlock& block = layout_.blocks[b];
            ref_blocks_[block.lower_ref].push_back(static_cast<int>(b));
            ref_blocks_[block.upper_ref].push_back(static_cast<int>(b));
            const double mid = (std::abs(targets[block.lower_ref]) + std::abs(targets[block.upper_ref])) / 2.0;
            for (int j = block.first_data; j < block.first_data + block.data_count; ++j, ++slot) {
                data_slot_[j] = slot;
                block_of_slot_[slot] = static_cast<int>(b);
                offset_[slot] = std::abs(targets[j]) - mid;
            }
        }

        // No single step resolves less than half the finest tap.
        double finest = std::abs(footprint.taps.front().weight);
        for (const auto& tap : footprint.taps) finest = std::min(finest, std::abs(tap.weight));
        reference_error_.resize(static_cast<std::size_t>(key.n));
        for (int i = 0; i < key.n; ++i) reference_error_[i] = std::max(kReferenceError, finest / 2.0 / key.v[i]);

        // Pixel (a*S + ra, b*S + ca) touches coefficient (a - di, b - dj) with weight w.
        residues_.assign(static_cast<std::size_t>(stride_) * stride_, {});
        for (const auto& tap : footprint.taps) {
            const int ra = tap.drow % stride_;
            const int ca = tap.dcol % stride_;
            residues_[static_cast<std::size_t>(ra) * stride_ + ca].push_back({tap.drow / stride_, tap.dcol / stride_, tap.weight});
        }
    }

    // `reference` is the unrounded reconstruction; steps pay their squared
    // distance from it, so the refinement trades distortion for read-out error.
    void run(GrayImage& image, const Plane& reference, int passes) {
        reference_ = &reference;
        load(image);
        GrayImage best = image;
        double best_worst = worst_error();
        for (int pass = 0; pass < passes; ++pass) {
            bool improved = false;
            // Work only on the positions that bound the worst-case error.
            const double settled = std::max(kSettled, 0.5 * worst_error());
            for (std::size_t k = 0; k < key_.positions.size(); ++k) {
                if (local_error(static_cast<int>(k)) < settled) continue;
                const Coord& pos = key_.positions[k];
                // First undo rounding (steps towards the unrounded value), then anything.
                for (bool toward_only : {true, false}) {
                    for (const auto& tap : footprint_.taps) {
                        if (local_error(static_cast<int>(k)) < settled) break;
                        const int r = (tap.drow + pos.row * stride_) % image.height();
                        const int c = (tap.dcol + pos.col * stride_) % image.width();
                        for (int step : {1, -1}) {
                            const int value = image.at(r, c) + step;
                            if (value < 0 || value > 255) continue;
                            if (toward_only && step * (image.at(r, c) - reference.at(r, c)) > 0) continue;
                            if (try_step(r, c, step, image.at(r, c))) {
                                image.at(r, c) = static_cast<std::uint8_t>(value);
                                improved = true;
                                break;
                            }
                        }
                    }
                }
            }
            // Resynchronise with an exact transform to shed accumulated drift.
            load(image);
            const double worst = worst_error();
            if (worst < best_worst) {
                best_worst = worst;
                best = image;
            }
            if (!improved) break;
        }
        image = best;
    }

private:
    static constexpr double kSettled = 1e-4;
    // Read-out error at which one grey level of extra distortion stops paying off.
    static constexpr double kReferenceError = 2e-3;

    struct Touch {
        int di;
        int dj;
        double weight;
    };

    void load(const GrayImage& image) {
        const WaveletPyramid pyramid = forward(image, key_.params.levels, key_.params.wavelet);
        const CoeffWindow window = pyramid.subband(key_.params.subband);
        coef_.resize(key_.positions.size());
        for (std::size_t k = 0; k < coef_.size(); ++k) coef_[k] = window(key_.positions[k].row, key_.positions[k].col);
        mid_.resize(layout_.blocks.size());
        for (std::size_t b = 0; b < layout_.blocks.size(); ++b)
            mid_[b] = (std::abs(coef_[layout_.blocks[b].lower_ref]) + std::abs(coef_[layout_.blocks[b].upper_ref])) / 2.0;
        err_.resize(static_cast<std::size_t>(key_.n));
        for (std::size_t b = 0; b < layout_.blocks.size(); ++b) {
            const CastingBlock& block = layout_.blocks[b];
            for (int j = block.first_data; j < block.first_data + block.data_count; ++j) {
                const int slot = data_slot_[j];
                err_[slot] = (std::abs(coef_[j]) - mid_[b] - offset_[slot]) / key_.v[slot];
            }
        }
    }

    double worst_error() const {
        double worst = 0.0;
        for (double e : err_) worst = std::max(worst, std::abs(e));
        return worst;
    }

    double local_error(int k) const {
        if (data_slot_[k] >= 0) return std::abs(err_[data_slot_[k]]);
        double worst = 0.0;
        for (int b : ref_blocks_[k]) {
            const CastingBlock& block = layout_.blocks[b];
            for (int j = block.first_data; j < block.first_data + block.data_count; ++j)
                worst = std::max(worst, std::abs(err_[data_slot_[j]]));
        }
        return worst;
    }

    // Applies the step to the tracked state if it lowers the objective.
    bool try_step(int r, int c, int step, int value) {
        touched_.clear();
        const int a = r / stride_, b = c / stride_;
        for (const Touch& t : residues_[static_cast<std::size_t>(r % stride_) * stride_ + c % stride_]) {
            const int i = ((a - t.di) % rows_ + rows_) % rows_;
            const int j = ((b - t.dj) % cols_ + cols_) % cols_;
            const int k = key_at_[static_cast<std::size_t>(i) * cols_ + j];
            if (k >= 0) touched_.push_back({k, step * t.weight});
        }
        if (touched_.empty()) return false;

        // Magnitude changes split into direct data moves and midpoint moves.
        direct_.clear();
        mid_shift_.clear();
        for (const auto& [k, delta] : touched_) {
            const double dm = std::abs(coef_[k] + delta) - std::abs(coef_[k]);
            if (data_slot_[k] >= 0) add(direct_, data_slot_[k], dm);
            else
                for (int blk : ref_blocks_[k]) add(mid_shift_, blk, dm / 2.0);
        }
        const double x0 = reference_->at(r, c);
        double gain = (value + step - x0) * (value + step - x0) - (value - x0) * (value - x0);
        auto change_of = [&](int slot) {
            double d = 0.0;
            for (const auto& [s, v] : direct_)
                if (s == slot) d += v;
            for (const auto& [blk, v] : mid_shift_)
                if (blk == block_of_slot_[slot]) d -= v;
            return d / key_.v[slot];
        };
        visited_.clear();
        auto visit = [&](int slot) {
            if (std::find(visited_.begin(), visited_.end(), slot) != visited_.end()) return;
            visited_.push_back(slot);
            const double e = err_[slot];
            const double e1 = e + change_of(slot);
            gain += penalty(slot, e1) - penalty(slot, e);
        };
        for (const auto& [slot, v] : direct_) visit(slot);
        for (const auto& [blk, v] : mid_shift_) {
            const CastingBlock& block = layout_.blocks[blk];
            for (int j = block.first_data; j < block.first_data + block.data_count; ++j) visit(data_slot_[j]);
        }
        if (!(gain < 0.0)) return false;

        for (int slot : visited_) err_[slot] += change_of(slot);
        for (const auto& [blk, v] : mid_shift_) mid_[blk] += v;
        for (const auto& [k, delta] : touched_) coef_[k] += delta;
        return true;
    }

    // A high power of the error relative to what the tap grid can resolve
    // approximates the worst-case error while staying smooth.
    double penalty(int slot, double e) const {
        e /= reference_error_[slot];
        const double e2 = e * e;
        const double e4 = e2 * e2;
        return e4 * e4;
    }

    static void add(std::vector<std::pair<int, double>>& acc, int id, double value) {
        for (auto& [i, v] : acc)
            if (i == id) {
                v += value;
                return;
            }
        acc.emplace_back(id, value);
    }

    const WatermarkKey& key_;
    const BasisFootprint& footprint_;
    const Plane* reference_ = nullptr;
    CastingLayout layout_;
    int rows_ = 0;
    int cols_ = 0;
    int stride_ = 1;
    std::vector<int> key_at_;
    std::vector<int> data_slot_;
    std::vector<int> block_of_slot_;
    std::vector<std::vector<int>> ref_blocks_;
    std::vector<double> offset_;
    std::vector<double> reference_error_;
    std::vector<std::vector<Touch>> residues_;
    std::vector<double> coef_;
    std::vector<double> mid_;
    std::vector<double> err_;
    std::vector<std::pair<int, double>> touched_;
    std::vector<std::pair<int, double>> direct_;
    std::vector<std::pair<int, double>> mid_shift_;
    std::vector<int> visited_;
};

}  // namespace

int reference_count(int n, int tau) {
    if (n < 1 || tau < 1) throw Error(ErrorKind::Parameter, "watermark size and tau must be positive");
    return n % tau == 0 ? n / tau + 1 : n / tau + 2;
}

CastingLayout casting_layout(int n, int tau) {
    CastingLayout layout;
    layout.n = n;
    layout.tau = tau;
    layout.t = reference_count(n, tau);
    layout.p = n + layout.t;

    // Full blocks: reference at i, data i+1..i+tau, next reference at i+tau+1.
    const int full = n / tau;
    for (int b = 0; b < full; ++b) {
        const int ref = b * (tau + 1);
        layout.blocks.push_back({ref, ref + 1, tau, ref + tau + 1});
    }
    // Remainder: the last r positions before the final reference, bracketed by
    // the reference that closes the last full block (or the first position).
    const int rest = n % tau;
    if (rest != 0) {
        const int upper = layout.p - 1;
        layout.blocks.push_back({upper - rest - 1, upper - rest, rest, upper});
    }
    return layout;
}

std::vector<int> CastingLayout::reference_indices() const {
    std::vector<int> refs;
    for (const CastingBlock& b : blocks) {
        if (refs.empty() || refs.back() != b.lower_ref) refs.push_back(b.lower_ref);
        refs.push_back(b.upper_ref);
    }
    return refs;
}

std::vector<int> CastingLayout::data_indices() const {
    std::vector<int> data;
    for (const CastingBlock& b : blocks)
        for (int j = 0; j < b.data_count; ++j) data.push_back(b.first_data + j);
    return data;
}

void validate_key(const WatermarkKey& key) {
    check_params(key.params);
    auto corrupt = [](const std::string& what) { throw Error(ErrorKind::CorruptKey, "corrupt key: " + what); };
    if (key.n < 1 || key.wm_width < 1 || key.wm_height < 1 || key.wm_width * key.wm_height != key.n)
        corrupt("watermark dimensions do not match n");
    if (key.t != reference_count(key.n, key.params.tau)) corrupt("reference count t does not match n and tau");
    if (key.positions.size() != static_cast<std::size_t>(key.p())) corrupt("positions must hold n + t entries");
    if (key.v.size() != static_cast<std::size_t>(key.n)) corrupt("v must hold n entries");
    if (key.wm_perm.size() != static_cast<std::size_t>(key.n)) corrupt("wm_perm must hold n entries");

    Rect rect{};
    try {
        rect = subband_rect(key.img_width, key.img_height, key.params.levels, key.params.subband);
        const int block = 1 << key.params.levels;
        if (key.img_width <= 0 || key.img_height <= 0 || key.img_width % block || key.img_height % block)
            corrupt("image dimensions not divisible by 2^levels");
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::CorruptKey) throw;
        corrupt(e.what());
    }

    std::vector<char> seen(static_cast<std::size_t>(rect.count()), 0);
    for (const Coord& c : key.positions) {
        if (c.row < 0 || c.col < 0 || c.row >= rect.rows || c.col >= rect.cols) corrupt("position outside subband");
        char& flag = seen[linear(c, rect.cols)];
        if (flag) corrupt("duplicate position");
        flag = 1;
    }
    for (double value : key.v)
        if (!(value > 0.0) || !std::isfinite(value)) corrupt("scaling factor v must be finite and positive");

    std::vector<char> hit(static_cast<std::size_t>(key.n), 0);
    for (int idx : key.wm_perm) {
        if (idx < 0 || idx >= key.n || hit[idx]) corrupt("wm_perm is not a permutation");
        hit[idx] = 1;
    }
}

SortedWatermark sort_watermark(const BinaryWatermark& w) {
    SortedWatermark sorted;
    sorted.perm.resize(w.size());
    std::iota(sorted.perm.begin(), sorted.perm.end(), 0);
    const auto& bits = w.bits();
    std::stable_sort(sorted.perm.begin(), sorted.perm.end(), [&bits](int a, int b) { return bits[a] < bits[b]; });
    sorted.bits.reserve(w.size());
    for (int idx : sorted.perm) sorted.bits.push_back(bits[idx]);
    return sorted;
}

BinaryWatermark unsort_watermark(const std::vector<std::uint8_t>& sorted_bits, const std::vector<int>& perm,
                                 int width, int height) {
    if (sorted_bits.size() != perm.size())
        throw Error(ErrorKind::Parameter, "sorted bits and permutation differ in length");
    std::vector<std::uint8_t> bits(sorted_bits.size());
    for (std::size_t i = 0; i < perm.size(); ++i) bits[perm[i]] = sorted_bits[i];
    return BinaryWatermark(width, height, std::move(bits));
}

std::vector<Coord> select_coefficients(CoeffWindow coeffs, const EntropyMap& emap, int p) {
    const int total = coeffs.count();
    if (emap.rows != coeffs.rows() || emap.cols != coeffs.cols())
        throw Error(ErrorKind::DimensionMismatch, "entropy map does not match the subband");
    if (p < 1 || p > total)
        throw Error(ErrorKind::Parameter, "cannot select " + std::to_string(p) + " coefficients from a subband of " +
                                              std::to_string(total));

    std::vector<int> order(static_cast<std::size_t>(total));
    std::iota(order.begin(), order.end(), 0);
    const auto by_entropy = [&emap](int a, int b) {
        const double ea = emap.values[a];
        const double eb = emap.values[b];
        return ea != eb ? ea > eb : a < b;
    };
    std::nth_element(order.begin(), order.begin() + (p - 1), order.end(), by_entropy);
    order.resize(static_cast<std::size_t>(p));

    const int cols = coeffs.cols();
    const auto by_magnitude = [&coeffs, cols](int a, int b) {
        const double ma = std::abs(coeffs(a / cols, a % cols));
        const double mb = std::abs(coeffs(b / cols, b % cols));
        return ma != mb ? ma < mb : a < b;
    };
    std::sort(order.begin(), order.end(), by_magnitude);

    std::vector<Coord> positions;
    positions.reserve(order.size());
    for (int idx : order) positions.push_back({idx / cols, idx % cols});
    return positions;
}

Casting cast_watermark(const WaveletPyramid& host, const BinaryWatermark& w, const EmbedParams& params) {
    check_params(params);
    if (host.levels() != params.levels || host.wavelet() != params.wavelet)
        throw Error(ErrorKind::Parameter, "host pyramid does not match the embedding parameters");
    Casting casting{host, {}, {}};
    MutableCoeffWindow window = casting.pyramid.subband(params.subband);

    const int n = static_cast<int>(w.size());
    const CastingLayout layout = casting_layout(n, params.tau);
    if (layout.p > window.count())
        throw Error(ErrorKind::Parameter, "watermark of " + std::to_string(n) + " bits needs " +
                                              std::to_string(layout.p) + " coefficients but " +
                                              params.subband.to_string() + " holds " +
                                              std::to_string(window.count()));

    const SubbandStats stats = subband_stats(window);
    const EntropyMap emap = entropy_map(window, stats);
    const std::vector<Coord> positions = select_coefficients(window, emap, layout.p);
    const SortedWatermark sorted = sort_watermark(w);

    std::vector<double> magnitudes(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i)
        magnitudes[i] = std::abs(window(positions[i].row, positions[i].col));

    WatermarkKey& key = casting.key;
    key.params = params;
    key.n = n;
    key.t = layout.t;
    key.wm_width = w.width();
    key.wm_height = w.height();
    key.img_width = host.width();
    key.img_height = host.height();
    key.positions = positions;
    key.wm_perm = sorted.perm;
    key.v.reserve(static_cast<std::size_t>(n));

    std::size_t index = 0;
    for (const CastingBlock& block : layout.blocks) {
        // Data magnitudes snap to the bracket midpoint, then carry v * bit.
        const double baseline = (magnitudes[block.lower_ref] + magnitudes[block.upper_ref]) / 2.0;
        for (int j = block.first_data; j < block.first_data + block.data_count; ++j, ++index) {
            const Coord& c = positions[j];
            const double strength = emap.at(c.row, c.col) * stats.t1;
            key.v.push_back(strength);
            double& coeff = window(c.row, c.col);
            const double sign = std::signbit(coeff) ? -1.0 : 1.0;
            coeff = sign * (baseline + strength * sorted.bits[index]);
        }
    }

    casting.targets.reserve(positions.size());
    for (const Coord& c : positions) casting.targets.push_back(window(c.row, c.col));
    return casting;
}

BasisFootprint basis_footprint(int width, int height, int levels, Wavelet wavelet, SubbandId id) {
    WaveletPyramid impulse(Plane(width, height), levels, wavelet);
    const Rect rect = impulse.subband_rect(id);
    impulse.coeffs().at(rect.row, rect.col) = 1.0;
    const Plane response = inverse_plane(impulse);

    BasisFootprint footprint;
    footprint.stride = 1 << id.level;
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c)
            if (std::abs(response.at(r, c)) > 1e-12) footprint.taps.push_back({r, c, response.at(r, c)});
    std::stable_sort(footprint.taps.begin(), footprint.taps.end(),
                     [](const auto& a, const auto& b) { return std::abs(a.weight) > std::abs(b.weight); });
    return footprint;
}

GrayImage settle_to_8bit(const Plane& plane, const WatermarkKey& key, const std::vector<double>& targets) {
    constexpr int kProjectionRounds = 50;
    constexpr int kRefinePasses = 40;
    const EmbedParams& params = key.params;
    if (targets.size() != key.positions.size())
        throw Error(ErrorKind::Parameter, "one target per key position is required");

    // Alternate between the [0, 255] box and the target coefficients until
    // the reconstruction no longer clips.
    Plane current = plane;
    for (int round = 0; round < kProjectionRounds; ++round) {
        bool clipped = false;
        for (double& v : current.values) {
            if (v < -0.5 || v > 255.5) clipped = true;
            v = std::clamp(v, 0.0, 255.0);
        }
        if (!clipped) break;
        WaveletPyramid pyramid = forward(current, params.levels, params.wavelet);
        MutableCoeffWindow window = pyramid.subband(params.subband);
        for (std::size_t i = 0; i < key.positions.size(); ++i)
            window(key.positions[i].row, key.positions[i].col) = targets[i];
        current = inverse_plane(pyramid);
    }

    GrayImage image = to_gray(current);
    const BasisFootprint footprint =
        basis_footprint(image.width(), image.height(), params.levels, params.wavelet, params.subband);
    ReadoutRefiner refiner(key, targets, footprint);
    refiner.run(image, current, kRefinePasses);
    return image;
}

EmbedResult embed(const GrayImage& host, const BinaryWatermark& w, const EmbedParams& params) {
    check_params(params);
    Casting casting = cast_watermark(forward(host, params.levels, params.wavelet), w, params);
    Plane plane = inverse_plane(casting.pyramid);
    GrayImage watermarked = settle_to_8bit(plane, casting.key, casting.targets);
    const double quality = psnr(host, watermarked);
    return {std::move(watermarked), std::move(plane), std::move(casting.key), quality};
}

Extraction extract(const GrayImage& image, const WatermarkKey& key) {
    validate_key(key);
    check_image_dims(image.width(), image.height(), key);
    return extract_from_pyramid(forward(image, key.params.levels, key.params.wavelet), key);
}

Extraction extract(const Plane& image, const WatermarkKey& key) {
    validate_key(key);
    check_image_dims(image.width, image.height, key);
    return extract_from_pyramid(forward(image, key.params.levels, key.params.wavelet), key);
}

}  // namespace fuzzymark
