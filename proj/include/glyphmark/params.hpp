#pragma once

// Embedding parameters. Reference values are given at a 512-px shortest
// edge (tau 80, sigma 10, T_embed 10) and auto-scale with image size.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include "glyphmark/image.hpp"

namespace glyphmark {

struct ScaledParams {
    int tau = 80;
    int sigma = 10;
    int t_embed = 10;
    int margin = 5;
    int r_h = 5;
    int spur_len = 10;
    int speckle = 64;
    double scale = 1.0;
};

struct Params {
    // reference-scale values (shortest edge = 512)
    double tau = 80.0;
    double sigma = 10.0;
    double t_embed = 10.0;
    double margin = 5.0;
    double r_h = 5.0;
    std::string backend = "warp";
    std::uint64_t seed = 0;
    std::string attacks;  // default attack list for eval, ';'-separated

    ScaledParams scaled_for(int height, int width) const {
        const double s = std::min(height, width) / 512.0;
        ScaledParams sp;
        sp.scale = s;
        sp.tau = std::max(4, static_cast<int>(std::lround(tau * s)));
        sp.sigma = std::max(2, static_cast<int>(std::lround(sigma * s)));
        sp.t_embed = std::max(2, static_cast<int>(std::lround(t_embed * s)));
        sp.margin = std::max(1, static_cast<int>(std::lround(margin * s)));
        sp.margin = std::min(sp.margin, sp.t_embed - 1);
        sp.r_h = std::max(2, static_cast<int>(std::lround(r_h * s)));
        sp.spur_len = std::max(3, static_cast<int>(std::lround(0.05 * std::min(height, width))));
        sp.speckle = speckle_area(height, width);
        return sp;
    }

    void set(const std::string& key, const std::string& value) {
        auto num = [&](double lo, double hi) {
            std::size_t pos = 0;
            double v = 0;
            try {
                v = std::stod(value, &pos);
            } catch (const std::exception&) {
                throw ConfigError("config: bad numeric value for " + key + ": " + value);
            }
            if (pos != value.size() || v < lo || v > hi)
                throw ConfigError("config: " + key + " out of range [" +
                                  std::to_string(lo) + ", " + std::to_string(hi) + "]: " + value);
            return v;
        };
        if (key == "tau") tau = num(1, 4096);
        else if (key == "sigma") sigma = num(0, 1024);
        else if (key == "t_embed") t_embed = num(2, 1024);
        else if (key == "margin") margin = num(1, 512);
        else if (key == "r_h") r_h = num(1, 256);
        else if (key == "backend") {
            if (value != "warp")
                throw ConfigError("config: unknown backend: " + value);
            backend = value;
        } else if (key == "seed") {
            try {
                seed = std::stoull(value);
            } catch (const std::exception&) {
                throw ConfigError("config: bad seed: " + value);
            }
        } else if (key == "attacks") {
            attacks = value;
        } else {
            throw ConfigError("config: unknown key: " + key);
        }
        if (margin >= t_embed)
            throw ConfigError("config: margin must be < t_embed");
    }

    static Params from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open config file: " + path);
        Params p;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            auto issp = [](unsigned char c) { return std::isspace(c); };
            line.erase(line.begin(), std::find_if_not(line.begin(), line.end(), issp));
            line.erase(std::find_if_not(line.rbegin(), line.rend(), issp).base(), line.end());
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
            std::string key = line.substr(0, eq);
            std::string value = line.substr(eq + 1);
            key.erase(std::find_if_not(key.rbegin(), key.rend(), issp).base(), key.end());
            value.erase(value.begin(), std::find_if_not(value.begin(), value.end(), issp));
            p.set(key, value);
        }
        return p;
    }
};

} // namespace glyphmark
