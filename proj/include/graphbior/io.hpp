#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace graphbior {

// 64-bit FNV-1a, used to bind coefficient trees to their inputs.
class Fnv1a {
public:
    void bytes(const void* data, size_t n)
    {
        auto p = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < n; ++i) {
            h_ ^= p[i];
            h_ *= 1099511628211ULL;
        }
    }
    void u64(std::uint64_t v) { bytes(&v, sizeof v); }
    void i64(std::int64_t v) { bytes(&v, sizeof v); }
    void f64(double v)
    {
        std::uint64_t b;
        std::memcpy(&b, &v, sizeof b);
        u64(b);
    }
    void str(std::string_view s) { bytes(s.data(), s.size()); u64(s.size()); }
    std::uint64_t value() const { return h_; }

private:
    std::uint64_t h_ = 14695981039346656037ULL;
};

std::string hex64(std::uint64_t v);

// %.17g
std::string format_double(double v);

// Write to path + ".tmp" then rename over path.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

std::vector<double> read_signal(const std::filesystem::path& path);
std::string signal_to_string(const std::vector<double>& f);
void write_signal(const std::filesystem::path& path, const std::vector<double>& f);

} // namespace graphbior
