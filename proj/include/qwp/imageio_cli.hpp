#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "qwp/core.hpp"
#include "qwp/inpaint.hpp"

namespace qwp {

// missing or unreadable file -> process exit code 3
struct FileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// bad config key or value -> process exit code 4
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Binary 8-bit P5 portable graymaps; pixels come back as doubles in 0..255.
Image load_image(const std::string& path);
void save_image(const Image& img, const std::string& path);

// Mask files carry {0,255}; in memory a mask is a 0/1 image.
Image mask_from_image(const Image& img);
Image mask_to_image(const Image& mask);

// Exactly floor(rho_missing * N^2) zeros, uniformly placed by a partial
// Fisher-Yates shuffle of the seeded generator.
Image make_random_mask(std::size_t N, double rho_missing, std::uint64_t seed);

// Adds zero-mean Gaussian noise of the given deviation everywhere.
Image add_noise(const Image& img, double sigma, std::uint64_t seed);

struct RunConfig {
    std::string method = "m2";
    std::string input;
    std::string output;
    std::string mask_file;
    double mask_rho = -1.0;  // missing fraction; negative = use mask_file
    double sigma = 0.0;
    std::uint64_t seed = 1;
    InpaintConfig inpaint;
};

RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& rc);
RunConfig load_config(const std::string& path);

// Deterministic test images: an oriented-sinusoid grid, and a smooth scene
// with blobs, a diagonal edge and a gradient.
Image synthetic_texture(std::size_t N);
Image synthetic_scene(std::size_t N);

int cli_main(int argc, const char* const* argv);

}  // namespace qwp
