#include "cbiou/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "cbiou/error.hpp"

namespace cbiou {

namespace {

// Fixed-width draws from mt19937_64 so that scenes match across standard
// libraries (std::normal_distribution is implementation-defined).
class Noise {
public:
    explicit Noise(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double gaussian() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

void SceneSpec::validate() const {
    if (frames < 1) throw InvalidArgument("scene needs frames >= 1");
    if (!(jitter >= 0.0) || !std::isfinite(jitter)) throw InvalidArgument("jitter must be >= 0");
    if (!(drop >= 0.0 && drop <= 1.0)) throw InvalidArgument("drop must lie in [0, 1]");
    for (const auto& [id, obj] : objects) {
        if (obj.segments.empty()) {
            throw InvalidArgument(fmt::format("object {} has no segments", id));
        }
        for (std::size_t i = 0; i < obj.segments.size(); ++i) {
            const Segment& s = obj.segments[i];
            if (s.first < 1 || s.last < s.first || s.last > frames) {
                throw InvalidArgument(
                    fmt::format("object {}: segment {}..{} outside 1..{}", id, s.first, s.last, frames));
            }
            if (i > 0 && s.first <= obj.segments[i - 1].last) {
                throw InvalidArgument(fmt::format("object {}: segments overlap or are unordered", id));
            }
        }
    }
}

SceneSpec parse_scene(std::istream& in) {
    SceneSpec spec;
    std::map<long, bool> has_start;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw.substr(0, raw.find('#')));
        if (s.empty()) continue;

        if (s.starts_with("object")) {
            const auto colon = s.find(':');
            if (colon == std::string::npos) throw ParseError(line, "object line needs ':'");
            std::istringstream head(s.substr(6, colon - 6));
            long id = 0;
            if (!(head >> id)) throw ParseError(line, "object id must be an integer");
            std::istringstream body(s.substr(colon + 1));
            std::string first;
            body >> first;
            ObjectScript& obj = spec.objects[id];
            if (first == "start") {
                double x, y, w, h;
                if (!(body >> x >> y >> w >> h)) throw ParseError(line, "start needs x y w h");
                try {
                    obj.start = BoundingBox(x, y, w, h);
                } catch (const InvalidArgument& e) {
                    throw ParseError(line, e.what());
                }
                has_start[id] = true;
            } else {
                const auto dots = first.find("..");
                if (dots == std::string::npos) throw ParseError(line, "segment needs 'a..b'");
                Segment seg{};
                try {
                    seg.first = std::stol(first.substr(0, dots));
                    seg.last = std::stol(first.substr(dots + 2));
                } catch (const std::exception&) {
                    throw ParseError(line, "segment range must be 'a..b' with integers");
                }
                if (!(body >> seg.vx >> seg.vy >> seg.vw >> seg.vh)) {
                    throw ParseError(line, "segment needs vx vy vw vh");
                }
                obj.segments.push_back(seg);
            }
            continue;
        }

        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected key=value");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        try {
            if (key == "seed") {
                spec.seed = std::stoull(value);
            } else if (key == "frames") {
                spec.frames = std::stol(value);
            } else if (key == "jitter") {
                spec.jitter = std::stod(value);
            } else if (key == "drop") {
                spec.drop = std::stod(value);
            } else {
                throw ParseError(line, "unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw ParseError(line, "bad value for '" + key + "'");
        } catch (const std::out_of_range&) {
            throw ParseError(line, "value out of range for '" + key + "'");
        }
    }
    for (const auto& [id, _] : spec.objects) {
        if (!has_start[id]) throw ParseError(0, fmt::format("object {} has no start line", id));
    }
    try {
        spec.validate();
    } catch (const InvalidArgument& e) {
        throw ParseError(0, e.what());
    }
    return spec;
}

SceneSpec parse_scene(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open " + path.string());
    return parse_scene(in);
}

Scene generate_scene(const SceneSpec& spec) {
    spec.validate();
    Scene scene;

    for (const auto& [id, obj] : spec.objects) {
        long prev = 0;
        double x = obj.start.x(), y = obj.start.y(), w = obj.start.w(), h = obj.start.h();
        for (const Segment& seg : obj.segments) {
            for (long f = seg.first; f <= seg.last; ++f) {
                if (prev != 0) {
                    const double k = static_cast<double>(f - prev);
                    x += k * seg.vx;
                    y += k * seg.vy;
                    w += k * seg.vw;
                    h += k * seg.vh;
                }
                prev = f;
                if (!(w > 0.0) || !(h > 0.0)) {
                    throw InvalidArgument(
                        fmt::format("object {} collapses to a non-positive size at frame {}", id, f));
                }
                scene.ground_truth[f].push_back({id, BoundingBox(x, y, w, h)});
            }
        }
    }

    Noise noise(spec.seed);
    for (const auto& [frame, anns] : scene.ground_truth) {
        for (const Annotation& a : anns) {
            // Always consume the same draws per box so drops do not shift later noise.
            const double u = noise.uniform();
            const double nx = noise.gaussian();
            const double ny = noise.gaussian();
            const double nw = noise.gaussian();
            const double nh = noise.gaussian();
            if (u < spec.drop) continue;
            const double s = spec.jitter;
            const BoundingBox& b = a.box;
            const BoundingBox noisy(b.x() + s * nx, b.y() + s * ny, std::max(1.0, b.w() + s * nw),
                                    std::max(1.0, b.h() + s * nh));
            scene.detections[frame].emplace_back(frame, s == 0.0 ? b : noisy, 1.0);
        }
    }
    return scene;
}

}  // namespace cbiou
