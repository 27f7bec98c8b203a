#include "qwp/imageio_cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "qwp/metrics.hpp"
#include "qwp/transform1d.hpp"
#include "qwp/transform2d.hpp"

namespace qwp {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace

Image load_image(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FileError("cannot open " + path);

    auto skip = [&f]() {
        for (;;) {
            int c = f.peek();
            if (c == EOF) return;
            if (std::isspace(c)) {
                f.get();
            } else if (c == '#') {
                while ((c = f.get()) != EOF && c != '\n') {
                }
            } else {
                return;
            }
        }
    };
    auto read_int = [&f, &skip, &path]() -> long {
        skip();
        long v = 0;
        if (!(f >> v)) throw FileError("malformed header in " + path);
        return v;
    };

    skip();
    char m0 = char(f.get()), m1 = char(f.get());
    if (m0 != 'P' || m1 != '5') throw FileError("not a binary P5 graymap: " + path);
    long w = read_int(), h = read_int(), maxval = read_int();
    if (w < 1 || h < 1 || w > 32768 || h > 32768)
        throw FileError("unreasonable dimensions in " + path);
    if (maxval != 255) throw FileError("unsupported maxval in " + path);
    int sep = f.get();
    if (sep == EOF || !std::isspace(sep)) throw FileError("malformed header in " + path);

    std::vector<unsigned char> buf(std::size_t(w) * std::size_t(h));
    f.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size()));
    if (std::size_t(f.gcount()) != buf.size())
        throw FileError("truncated pixel payload in " + path);

    Image img{std::size_t(h), std::size_t(w)};
    for (std::size_t i = 0; i < buf.size(); ++i) img.data()[i] = double(buf[i]);
    return img;
}

void save_image(const Image& img, const std::string& path) {
    require(img.rows() > 0 && img.cols() > 0, "save_image: empty image");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FileError("cannot write " + path);
    f << "P5\n" << img.cols() << " " << img.rows() << "\n255\n";
    std::vector<unsigned char> buf(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) {
        double v = std::lround(img.data()[i]);
        buf[i] = (unsigned char)(v < 0.0 ? 0.0 : v > 255.0 ? 255.0 : v);
    }
    f.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
    if (!f) throw FileError("short write to " + path);
}

Image mask_from_image(const Image& img) {
    Image m(img.rows(), img.cols());
    for (std::size_t i = 0; i < img.size(); ++i) m.data()[i] = img.data()[i] > 127.0 ? 1.0 : 0.0;
    return m;
}

Image mask_to_image(const Image& mask) {
    Image m(mask.rows(), mask.cols());
    for (std::size_t i = 0; i < mask.size(); ++i) m.data()[i] = mask.data()[i] != 0.0 ? 255.0 : 0.0;
    return m;
}

namespace {

// uniform draw from [0, n) without modulo bias; mt19937_64 output is
// standardized, so results are stable across platforms
std::uint64_t bounded(std::mt19937_64& g, std::uint64_t n) {
    const std::uint64_t rem = (std::uint64_t(0) - n) % n;
    for (;;) {
        std::uint64_t r = g();
        if (r >= rem) return (r - rem) % n;
    }
}

std::uint64_t noise_seed(std::uint64_t seed) {
    return seed * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL;
}

}  // namespace

Image make_random_mask(std::size_t N, double rho_missing, std::uint64_t seed) {
    require(rho_missing >= 0.0 && rho_missing < 1.0, "make_random_mask: need 0 <= rho < 1");
    const std::size_t total = N * N;
    const std::size_t K = std::size_t(rho_missing * double(total));
    std::vector<std::uint32_t> idx(total);
    for (std::size_t i = 0; i < total; ++i) idx[i] = std::uint32_t(i);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < K; ++i) {
        std::size_t j = i + std::size_t(bounded(rng, total - i));
        std::swap(idx[i], idx[j]);
    }
    Image mask(N, N, 1.0);
    for (std::size_t i = 0; i < K; ++i) mask.data()[idx[i]] = 0.0;
    return mask;
}

Image add_noise(const Image& img, double sigma, std::uint64_t seed) {
    require(sigma >= 0.0, "add_noise: sigma must be non-negative");
    Image out = img;
    if (sigma == 0.0) return out;
    std::mt19937_64 rng(seed);
    const double twopi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < out.size(); i += 2) {
        double u1 = (double(rng() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
        double u2 = double(rng() >> 11) * 0x1.0p-53;          // [0,1)
        double r = std::sqrt(-2.0 * std::log(u1));
        out.data()[i] += sigma * r * std::cos(twopi * u2);
        if (i + 1 < out.size()) out.data()[i + 1] += sigma * r * std::sin(twopi * u2);
    }
    return out;
}

namespace {

int to_int(const std::string& v, const std::string& key) {
    char* end = nullptr;
    long r = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || *end != '\0') throw ConfigError("invalid integer for " + key + ": " + v);
    return int(r);
}

std::uint64_t to_u64(const std::string& v, const std::string& key) {
    char* end = nullptr;
    unsigned long long r = std::strtoull(v.c_str(), &end, 10);
    if (v.empty() || *end != '\0') throw ConfigError("invalid integer for " + key + ": " + v);
    return r;
}

double to_double(const std::string& v, const std::string& key) {
    char* end = nullptr;
    double r = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0') throw ConfigError("invalid number for " + key + ": " + v);
    return r;
}

bool to_bool(const std::string& v, const std::string& key) {
    if (v == "0" || v == "false") return false;
    if (v == "1" || v == "true") return true;
    throw ConfigError("invalid boolean for " + key + ": " + v);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<int> parse_levels(const std::string& v) {
    std::vector<int> out;
    for (const auto& tok : split(v, ',')) out.push_back(to_int(tok, "levels"));
    return out;
}

template <typename T, typename F>
std::map<int, T> parse_pairs(const std::string& v, const std::string& key, F conv) {
    std::map<int, T> out;
    if (v.empty()) return out;
    for (const auto& tok : split(v, ',')) {
        auto pos = tok.find(':');
        if (pos == std::string::npos) throw ConfigError("expected level:value in " + key);
        out[to_int(tok.substr(0, pos), key)] = conv(tok.substr(pos + 1), key);
    }
    return out;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_levels(const std::vector<int>& lv) {
    std::string s;
    for (std::size_t i = 0; i < lv.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(lv[i]);
    }
    return s;
}

template <typename T>
std::string fmt_pairs(const std::map<int, T>& m) {
    std::string s;
    bool first = true;
    for (const auto& [k, v] : m) {
        if (!first) s += ',';
        first = false;
        s += std::to_string(k) + ":";
        if constexpr (std::is_same_v<T, double>)
            s += fmt_double(v);
        else
            s += std::to_string(v);
    }
    return s;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig rc;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && std::isspace((unsigned char)line.back())) line.pop_back();
        std::size_t start = 0;
        while (start < line.size() && std::isspace((unsigned char)line[start])) ++start;
        line = line.substr(start);
        if (line.empty() || line[0] == '#') continue;
        auto pos = line.find('=');
        if (pos == std::string::npos) throw ConfigError("expected key=value, got: " + line);
        std::string key = line.substr(0, pos);
        std::string val = line.substr(pos + 1);

        if (key == "method") {
            if (val != "m1" && val != "m2") throw ConfigError("method must be m1 or m2");
            rc.method = val;
        } else if (key == "input") {
            rc.input = val;
        } else if (key == "output") {
            rc.output = val;
        } else if (key == "mask_file") {
            rc.mask_file = val;
        } else if (key == "mask_rho") {
            rc.mask_rho = to_double(val, key);
        } else if (key == "sigma") {
            rc.sigma = to_double(val, key);
        } else if (key == "seed") {
            rc.seed = to_u64(val, key);
        } else if (key == "p") {
            rc.inpaint.p = to_int(val, key);
        } else if (key == "levels") {
            rc.inpaint.levels = parse_levels(val);
        } else if (key == "parent_level") {
            rc.inpaint.parent_level = to_int(val, key);
        } else if (key == "weights") {
            rc.inpaint.weights = parse_pairs<double>(val, key, to_double);
        } else if (key == "windows") {
            rc.inpaint.windows = parse_pairs<int>(val, key, to_int);
        } else if (key == "T") {
            rc.inpaint.T = to_int(val, key);
        } else if (key == "mu") {
            rc.inpaint.mu = to_double(val, key);
        } else if (key == "R1") {
            rc.inpaint.R1 = to_int(val, key);
        } else if (key == "R2") {
            rc.inpaint.R2 = to_int(val, key);
        } else if (key == "tol1") {
            rc.inpaint.tol1 = to_double(val, key);
        } else if (key == "tol2") {
            rc.inpaint.tol2 = to_double(val, key);
        } else if (key == "L1") {
            rc.inpaint.L1 = to_int(val, key);
        } else if (key == "L2") {
            rc.inpaint.L2 = to_int(val, key);
        } else if (key == "L3") {
            rc.inpaint.L3 = to_int(val, key);
        } else if (key == "delta_normalized") {
            rc.inpaint.delta_normalized = to_bool(val, key);
        } else {
            throw ConfigError("unknown config key: " + key);
        }
    }
    return rc;
}

std::string serialize_config(const RunConfig& rc) {
    std::ostringstream out;
    out << "method=" << rc.method << "\n";
    out << "input=" << rc.input << "\n";
    out << "output=" << rc.output << "\n";
    out << "mask_file=" << rc.mask_file << "\n";
    out << "mask_rho=" << fmt_double(rc.mask_rho) << "\n";
    out << "sigma=" << fmt_double(rc.sigma) << "\n";
    out << "seed=" << rc.seed << "\n";
    out << "p=" << rc.inpaint.p << "\n";
    out << "levels=" << fmt_levels(rc.inpaint.levels) << "\n";
    out << "parent_level=" << rc.inpaint.parent_level << "\n";
    out << "weights=" << fmt_pairs(rc.inpaint.weights) << "\n";
    out << "windows=" << fmt_pairs(rc.inpaint.windows) << "\n";
    out << "T=" << rc.inpaint.T << "\n";
    out << "mu=" << fmt_double(rc.inpaint.mu) << "\n";
    out << "R1=" << rc.inpaint.R1 << "\n";
    out << "R2=" << rc.inpaint.R2 << "\n";
    out << "tol1=" << fmt_double(rc.inpaint.tol1) << "\n";
    out << "tol2=" << fmt_double(rc.inpaint.tol2) << "\n";
    out << "L1=" << rc.inpaint.L1 << "\n";
    out << "L2=" << rc.inpaint.L2 << "\n";
    out << "L3=" << rc.inpaint.L3 << "\n";
    out << "delta_normalized=" << (rc.inpaint.delta_normalized ? 1 : 0) << "\n";
    return out.str();
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw FileError("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

namespace {

Image apply_mask(const Image& x, const Image& mask) {
    Image out(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.size(); ++i) out.data()[i] = x.data()[i] * mask.data()[i];
    return out;
}

Image resolve_mask(const RunConfig& rc, std::size_t N) {
    if (!rc.mask_file.empty()) {
        Image m = mask_from_image(load_image(rc.mask_file));
        require(m.rows() == N && m.cols() == N, "mask size does not match image");
        return m;
    }
    if (rc.mask_rho >= 0.0) return make_random_mask(N, rc.mask_rho, rc.seed);
    throw ConfigError("no mask source: set mask_file or mask_rho");
}

int run_inpaint(const RunConfig& rc, bool progress, const std::string& reference) {
    Image in = load_image(rc.input);
    require(in.rows() == in.cols(), "inpaint: image must be square");
    const std::size_t N = in.rows();

    Image mask = resolve_mask(rc, N);
    MaskedImage mi{apply_mask(in, mask), mask, rc.sigma};

    InpaintConfig cfg = rc.inpaint;
    if (progress)
        cfg.progress = [](int k, int nu, double lambda, double delta) {
            std::fprintf(stderr, "k=%d nu=%d lambda=%.6g delta=%.6g\n", k, nu, lambda, delta);
        };

    std::size_t n1 = extended_size(N, cfg.T);
    FilterBank fb = build_filter_bank(cfg.p, n1, cfg.effective_parent_level());

    Image out = rc.method == "m1" ? m1_inpaint(mi, cfg, fb) : m2_inpaint(mi, cfg, fb);
    save_image(out, rc.output);

    if (!reference.empty()) {
        Image ref = load_image(reference);
        std::printf("%s\n", format_report(quality(ref, out)).c_str());
    }
    return 0;
}

int run_degrade(const std::string& clean_path, const std::string& out_path,
                const std::string& mask_out, const std::string& mask_in, double rho,
                double sigma, std::uint64_t seed) {
    Image x = load_image(clean_path);
    Image mask;
    if (!mask_in.empty()) {
        mask = mask_from_image(load_image(mask_in));
        require(mask.same_shape(x), "mask size does not match image");
    } else {
        require(x.rows() == x.cols(), "degrade: random mask needs a square image");
        if (rho < 0.0) throw ConfigError("no mask source: set --rho or --mask");
        mask = make_random_mask(x.rows(), rho, seed);
    }
    Image degraded = apply_mask(add_noise(x, sigma, noise_seed(seed)), mask);
    save_image(degraded, out_path);
    save_image(mask_to_image(mask), mask_out);
    return 0;
}

int run_metrics(const std::string& a_path, const std::string& b_path) {
    Image a = load_image(a_path);
    Image b = load_image(b_path);
    std::printf("%s\n", format_report(quality(a, b)).c_str());
    return 0;
}

void write_filter_csv(const FilterBank& fb, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw FileError("cannot write " + path);
    f << "n,beta_re,beta_im,alpha_re,alpha_im,f0_re,f0_im,f1_re,f1_im\n";
    const auto& fl = fb.first();
    for (std::size_t n = 0; n < fb.N(); ++n) {
        f << n;
        for (const auto* v : {&fl.beta, &fl.alpha, &fl.f0, &fl.f1})
            f << "," << (*v)[n].real() << "," << (*v)[n].imag();
        f << "\n";
    }
}

void write_wave_csv(const FilterBank& fb, int m, std::size_t l, const std::string& path) {
    CSignal psi = waveform_1d(fb, m, l, WaveKind::psi);
    CSignal phi = waveform_1d(fb, m, l, WaveKind::phi);
    std::ofstream f(path);
    if (!f) throw FileError("cannot write " + path);
    f << "k,psi,phi\n";
    for (std::size_t k = 0; k < psi.size(); ++k)
        f << k << "," << psi[k].real() << "," << phi[k].real() << "\n";
}

Image to_gray(const Image& w) {
    double peak = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) peak = std::max(peak, std::abs(w.data()[i]));
    Image out(w.rows(), w.cols());
    for (std::size_t i = 0; i < w.size(); ++i)
        out.data()[i] = 128.0 + (peak > 0.0 ? 127.0 * w.data()[i] / peak : 0.0);
    return out;
}

int run_waveforms(int p, std::size_t N, int m, const std::string& dir) {
    std::filesystem::create_directories(dir);
    FilterBank fb = build_filter_bank(p, N, m);
    int files = 0;

    write_filter_csv(fb, dir + "/filters.csv");
    ++files;
    const std::size_t bands = std::size_t(1) << m;
    for (std::size_t l = 0; l < bands; ++l) {
        write_wave_csv(fb, m, l, dir + "/psi_m" + std::to_string(m) + "_l" + std::to_string(l) +
                                     ".csv");
        ++files;
    }
    for (int sg = 0; sg < 2; ++sg) {
        Sign sign = sg == 0 ? Sign::plus : Sign::minus;
        const char* tag = sg == 0 ? "plus" : "minus";
        for (std::size_t j = 0; j < bands; ++j)
            for (std::size_t l = 0; l < bands; ++l) {
                if (m > 3 && j != l) continue;  // keep deep-level galleries small
                DirectionalWaveform w = directional_waveform_2d(fb, m, j, l, sign);
                std::string name = dir + "/wave_m" + std::to_string(m) + "_j" +
                                   std::to_string(j) + "_l" + std::to_string(l) + "_" + tag +
                                   ".pgm";
                save_image(to_gray(w.values), name);
                ++files;
            }
    }
    std::printf("wrote %d files to %s\n", files, dir.c_str());
    return 0;
}

int run_roundtrip(int p, std::size_t N, int M, const std::string& image_path) {
    Image x = image_path.empty() ? synthetic_scene(N) : load_image(image_path);
    require(x.rows() == x.cols(), "roundtrip: image must be square");
    FilterBank fb = build_filter_bank(p, x.rows(), M);
    Tree2D t = qwp_forward_2d(x, fb, M);
    Image xr = qwp_inverse_2d(t, fb);
    double maxerr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        maxerr = std::max(maxerr, std::abs(x.data()[i] - xr.data()[i]));
    double db = psnr(x, xr);
    std::printf("psnr=%.4f max_err=%.3e\n", db, maxerr);
    return db >= 250.0 ? 0 : 1;
}

}  // namespace

Image synthetic_texture(std::size_t N) {
    Image img(N, N);
    const double pi = std::numbers::pi;
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) {
            double x = double(c), y = double(r);
            double a = std::sin(2.0 * pi * 0.09 * (x * 0.866 + y * 0.5));
            double b = std::sin(2.0 * pi * 0.05 * (-x * 0.5 + y * 0.866));
            double d = std::sin(2.0 * pi * (x + y) * 0.02);
            double v = 127.5 + 55.0 * a + 35.0 * b + 20.0 * d;
            img(r, c) = std::clamp(v, 0.0, 255.0);
        }
    return img;
}

Image synthetic_scene(std::size_t N) {
    Image img(N, N);
    const double n = double(N);
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) {
            double x = double(c) / n, y = double(r) / n;
            double blob1 = 95.0 * std::exp(-((x - 0.32) * (x - 0.32) + (y - 0.3) * (y - 0.3)) /
                                           (2.0 * 0.03));
            double blob2 = 70.0 * std::exp(-((x - 0.7) * (x - 0.7) + (y - 0.65) * (y - 0.65)) /
                                           (2.0 * 0.008));
            double edge = 60.0 / (1.0 + std::exp(-(x - y - 0.1) / 0.015));
            double ramp = 40.0 * (x + y) / 2.0;
            double v = 20.0 + blob1 + blob2 + edge + ramp;
            img(r, c) = std::clamp(v, 0.0, 255.0);
        }
    return img;
}

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"directional spline wavelet-packet image restoration tools"};
    app.require_subcommand(0, 1);

    // inpaint
    auto* sub_in = app.add_subcommand("inpaint", "restore missing pixels of a degraded image");
    std::string cfg_path, method, mask_path, reference, in_path, out_path;
    double opt_rho = -1.0, opt_sigma = 0.0, opt_mu = 0.0, opt_tol1 = 0.0, opt_tol2 = 0.0;
    std::uint64_t opt_seed = 1;
    int opt_p = 0, opt_T = 0, opt_R1 = 0, opt_R2 = 0, opt_L1 = 0, opt_L2 = 0, opt_L3 = 0;
    std::string opt_levels;
    bool progress = false, delta_norm = false;
    sub_in->add_option("--config", cfg_path, "key=value config file");
    sub_in->add_option("--method", method, "m1 or m2");
    sub_in->add_option("--mask", mask_path, "mask image, white = pixel present");
    sub_in->add_option("--mask-rho", opt_rho, "random mask: fraction of missing pixels");
    sub_in->add_option("--sigma", opt_sigma, "noise deviation assumed by the shrinkage");
    sub_in->add_option("--seed", opt_seed, "seed for the random mask");
    sub_in->add_option("--p", opt_p, "spline order");
    sub_in->add_option("--levels", opt_levels, "fusion levels, e.g. 3,4");
    sub_in->add_option("--T", opt_T, "extension margin target");
    sub_in->add_option("--mu", opt_mu, "data-step regularization weight");
    sub_in->add_option("--R1", opt_R1);
    sub_in->add_option("--R2", opt_R2);
    sub_in->add_option("--tol1", opt_tol1);
    sub_in->add_option("--tol2", opt_tol2);
    sub_in->add_option("--L1", opt_L1);
    sub_in->add_option("--L2", opt_L2);
    sub_in->add_option("--L3", opt_L3);
    sub_in->add_flag("--delta-normalized", delta_norm, "scale update norms by the extended side");
    sub_in->add_flag("--progress", progress, "log one line per iteration to stderr");
    sub_in->add_option("--reference", reference, "clean image; prints psnr/ssim of the result");
    sub_in->add_option("input", in_path, "degraded image");
    sub_in->add_option("output", out_path, "restored image destination");

    // degrade
    auto* sub_de = app.add_subcommand("degrade", "apply a mask and noise to a clean image");
    std::string de_in, de_out, de_mask_out, de_mask_in;
    double de_rho = -1.0, de_sigma = 0.0;
    std::uint64_t de_seed = 1;
    sub_de->add_option("--rho", de_rho, "fraction of missing pixels");
    sub_de->add_option("--mask", de_mask_in, "use this mask file instead of a random mask");
    sub_de->add_option("--sigma", de_sigma, "noise deviation");
    sub_de->add_option("--seed", de_seed);
    sub_de->add_option("input", de_in, "clean image")->required();
    sub_de->add_option("output", de_out, "degraded image destination")->required();
    sub_de->add_option("maskout", de_mask_out, "mask destination")->required();

    // metrics
    auto* sub_me = app.add_subcommand("metrics", "psnr and ssim of two images");
    std::string me_a, me_b;
    sub_me->add_option("reference", me_a)->required();
    sub_me->add_option("candidate", me_b)->required();

    // waveforms
    auto* sub_wa = app.add_subcommand("waveforms", "export waveform galleries and filter tables");
    int wa_p = 5, wa_m = 2;
    std::size_t wa_N = 256;
    std::string wa_dir;
    sub_wa->add_option("--p", wa_p, "spline order");
    sub_wa->add_option("--N", wa_N, "transform size");
    sub_wa->add_option("--level", wa_m, "decomposition level");
    sub_wa->add_option("outdir", wa_dir, "output directory")->required();

    // roundtrip
    auto* sub_ro = app.add_subcommand("roundtrip", "forward+inverse transform self-test");
    int ro_p = 5, ro_M = 4;
    std::size_t ro_N = 256;
    std::string ro_image;
    sub_ro->add_option("--p", ro_p, "spline order");
    sub_ro->add_option("--N", ro_N, "size of the built-in test image");
    sub_ro->add_option("--levels", ro_M, "decomposition depth");
    sub_ro->add_option("--image", ro_image, "use this image instead of the built-in one");

    try {
        app.parse(argc, argv);

        if (app.get_subcommands().empty()) {
            std::fputs(app.help().c_str(), stderr);
            return 2;
        }
        if (app.got_subcommand(sub_in)) {
            RunConfig rc;
            if (!cfg_path.empty()) rc = load_config(cfg_path);
            if (sub_in->count("--method")) {
                if (method != "m1" && method != "m2")
                    throw ConfigError("method must be m1 or m2");
                rc.method = method;
            }
            if (sub_in->count("--mask")) rc.mask_file = mask_path;
            if (sub_in->count("--mask-rho")) rc.mask_rho = opt_rho;
            if (sub_in->count("--sigma")) rc.sigma = opt_sigma;
            if (sub_in->count("--seed")) rc.seed = opt_seed;
            if (sub_in->count("--p")) rc.inpaint.p = opt_p;
            if (sub_in->count("--levels")) rc.inpaint.levels = parse_levels(opt_levels);
            if (sub_in->count("--T")) rc.inpaint.T = opt_T;
            if (sub_in->count("--mu")) rc.inpaint.mu = opt_mu;
            if (sub_in->count("--R1")) rc.inpaint.R1 = opt_R1;
            if (sub_in->count("--R2")) rc.inpaint.R2 = opt_R2;
            if (sub_in->count("--tol1")) rc.inpaint.tol1 = opt_tol1;
            if (sub_in->count("--tol2")) rc.inpaint.tol2 = opt_tol2;
            if (sub_in->count("--L1")) rc.inpaint.L1 = opt_L1;
            if (sub_in->count("--L2")) rc.inpaint.L2 = opt_L2;
            if (sub_in->count("--L3")) rc.inpaint.L3 = opt_L3;
            if (delta_norm) rc.inpaint.delta_normalized = true;
            if (!in_path.empty()) rc.input = in_path;
            if (!out_path.empty()) rc.output = out_path;
            if (rc.input.empty() || rc.output.empty())
                throw UsageError("inpaint needs input and output paths");
            return run_inpaint(rc, progress, reference);
        }
        if (app.got_subcommand(sub_de))
            return run_degrade(de_in, de_out, de_mask_out, de_mask_in, de_rho, de_sigma, de_seed);
        if (app.got_subcommand(sub_me)) return run_metrics(me_a, me_b);
        if (app.got_subcommand(sub_wa)) return run_waveforms(wa_p, wa_N, wa_m, wa_dir);
        if (app.got_subcommand(sub_ro)) return run_roundtrip(ro_p, ro_N, ro_M, ro_image);
        return 2;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const FileError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

}  // namespace qwp
