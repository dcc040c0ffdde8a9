#include "graphbior/io.hpp"
#include "graphbior/error.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace graphbior {

std::string hex64(std::uint64_t v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw ValidationError("cannot open '" + tmp.string() + "' for writing");
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        os.flush();
        if (!os)
            throw ValidationError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw ValidationError("cannot rename into '" + path.string() + "'");
    }
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw ValidationError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::vector<double> read_signal(const std::filesystem::path& path)
{
    std::istringstream is(read_file(path));
    std::vector<double> f;
    std::string line;
    size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        try {
            f.push_back(std::stod(line));
        } catch (const std::exception&) {
            throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                                  ": not a number");
        }
    }
    return f;
}

std::string signal_to_string(const std::vector<double>& f)
{
    std::string out;
    out.reserve(f.size() * 24);
    for (double v : f) {
        out += format_double(v);
        out += '\n';
    }
    return out;
}

void write_signal(const std::filesystem::path& path, const std::vector<double>& f)
{
    write_file_atomic(path, signal_to_string(f));
}

} // namespace graphbior
