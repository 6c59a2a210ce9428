#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "wcbo/interpolate.hpp"

namespace wcbo::harness {

/// Shortest round-trip decimal representation ('.' decimal point).
std::string format_number(double v);

/// Fixed 9-significant-digit representation used in SVG output.
std::string format_svg_number(double v);

/// Comma-separated table with a header row and LF line endings.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    std::string str() const;
    std::size_t rows() const { return rows_.size(); }
    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& data() const { return rows_; }

    /// Array of records; cells that parse as numbers become JSON numbers.
    nlohmann::json to_json() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Writes via a temporary sibling file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

std::string sha256_hex(const std::string& bytes);

/// SHA-1 of "blob <size>\0<bytes>", as git hashes file contents.
std::string git_blob_sha1(const std::string& bytes);

nlohmann::json to_json(const RkhsFunction& f);
RkhsFunction rkhs_function_from_json(const nlohmann::json& j);
nlohmann::json to_json(const KernelSpec& k);
KernelSpec kernel_from_json(const nlohmann::json& j);

/// Evaluates fn(i) for i in [0, n) on up to `jobs` threads. Results are
/// stored by index, so the output does not depend on the job count. The
/// first exception (lowest index) is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t n, int jobs, const std::function<T(std::size_t)>& fn) {
    std::vector<std::optional<T>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    std::vector<T> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace wcbo::harness
