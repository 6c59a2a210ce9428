#include "wcbo/harness/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "wcbo/errors.hpp"

namespace wcbo::harness {

std::string format_number(double v) {
    if (v == 0.0) return "0";  // folds -0
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

std::string format_svg_number(double v) {
    std::array<char, 64> buf{};
    const int n = std::snprintf(buf.data(), buf.size(), "%.9g", v == 0.0 ? 0.0 : v);
    return {buf.data(), static_cast<std::size_t>(n)};
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) throw Error("CSV row width does not match the header");
    rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
    std::string out;
    auto emit = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    emit(header_);
    for (const auto& r : rows_) emit(r);
    return out;
}

nlohmann::json CsvTable::to_json() const {
    auto out = nlohmann::json::array();
    for (const auto& r : rows_) {
        nlohmann::json rec = nlohmann::json::object();
        for (std::size_t i = 0; i < r.size(); ++i) {
            double v = 0.0;
            const auto* end = r[i].data() + r[i].size();
            const auto res = std::from_chars(r[i].data(), end, v);
            if (!r[i].empty() && res.ec == std::errc() && res.ptr == end && std::isfinite(v)) {
                rec[header_[i]] = v;
            } else {
                rec[header_[i]] = r[i];
            }
        }
        out.push_back(std::move(rec));
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("short write to '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

std::string digest_hex(const EVP_MD* md, const std::string& bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, md, nullptr) != 1)
        throw Error("digest computation failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) { return digest_hex(EVP_sha256(), bytes); }

std::string git_blob_sha1(const std::string& bytes) {
    std::string blob = "blob " + std::to_string(bytes.size());
    blob.push_back('\0');
    blob += bytes;
    return digest_hex(EVP_sha1(), blob);
}

nlohmann::json to_json(const KernelSpec& k) {
    nlohmann::json j;
    j["name"] = k.name();
    switch (k.kind()) {
        case KernelKind::SquaredExponential: j["lengthscale"] = k.lengthscale(); break;
        case KernelKind::Matern:
            j["nu"] = k.nu();
            j["rho"] = k.rho();
            j["variance"] = k.variance();
            break;
        case KernelKind::Quadratic: break;
    }
    return j;
}

KernelSpec kernel_from_json(const nlohmann::json& j) {
    const std::string name = j.at("name").get<std::string>();
    if (name == "se") return KernelSpec::squared_exponential(j.at("lengthscale").get<double>());
    if (name == "matern")
        return KernelSpec::matern(j.at("nu").get<double>(), j.at("rho").get<double>(), j.at("variance").get<double>());
    if (name == "quadratic") return KernelSpec::quadratic();
    throw ConfigError("unknown kernel '" + name + "' in JSON");
}

nlohmann::json to_json(const RkhsFunction& f) {
    nlohmann::json j;
    j["kernel"] = to_json(f.kernel());
    j["dim"] = f.dim();
    auto centers = nlohmann::json::array();
    for (const auto& c : f.centers()) centers.push_back(std::vector<double>(c.data(), c.data() + c.size()));
    j["centers"] = std::move(centers);
    j["weights"] = std::vector<double>(f.weights().data(), f.weights().data() + f.weights().size());
    j["norm"] = f.norm();
    return j;
}

RkhsFunction rkhs_function_from_json(const nlohmann::json& j) {
    const KernelSpec kernel = kernel_from_json(j.at("kernel"));
    const auto w = j.at("weights").get<std::vector<double>>();
    if (w.empty()) return RkhsFunction::zero(kernel, j.at("dim").get<int>());
    PointList centers;
    for (const auto& c : j.at("centers")) {
        const auto v = c.get<std::vector<double>>();
        centers.emplace_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    return RkhsFunction(kernel, std::move(centers),
                        Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size())));
}

}  // namespace wcbo::harness
