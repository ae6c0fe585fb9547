#include "tomobell/io.hpp"

#include "tomobell/errors.hpp"
#include "tomobell/special_functions.hpp"

#include <openssl/sha.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace tomobell {

std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    const std::filesystem::path dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    std::filesystem::create_directories(dir);
    const std::filesystem::path tmp =
        dir / ("." + path.filename().string() + ".tmp" + std::to_string(static_cast<long>(::getpid())));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw ConfigError("failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw ConfigError("cannot move output into place at " + path.string() + ": " + ec.message());
    }
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows)
{
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_number(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string sha256_hex(const std::string& data)
{
    unsigned char digest[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), digest);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned char c : digest) {
        out += hex[c >> 4];
        out += hex[c & 15];
    }
    return out;
}

nlohmann::json density_matrix_to_json(const DensityMatrix& rho)
{
    nlohmann::json entries = nlohmann::json::array();
    const auto& m = rho.entries();
    for (long col = 0; col < m.outerSize(); ++col)
        for (DensityMatrix::Sparse::InnerIterator it(m, col); it; ++it)
            entries.push_back({it.row(), it.col(), it.value().real(), it.value().imag()});
    return {{"cutoff", rho.cutoff()}, {"modes", rho.modes()}, {"trace_deficit", rho.trace_deficit()},
            {"entries", entries}};
}

DensityMatrix density_matrix_from_json(const nlohmann::json& j)
{
    try {
        const int cutoff = j.at("cutoff").get<int>();
        const int modes = j.at("modes").get<int>();
        const double deficit = j.value("trace_deficit", 0.0);
        if (cutoff < 1 || (modes != 1 && modes != 2)) throw ConfigError("density matrix JSON: bad cutoff or modes");
        const long dim = modes == 1 ? cutoff : static_cast<long>(cutoff) * cutoff;
        std::vector<Eigen::Triplet<std::complex<double>, long>> triplets;
        for (const auto& e : j.at("entries")) {
            if (!e.is_array() || e.size() != 4) throw ConfigError("density matrix JSON: entries are [row, col, re, im]");
            const long r = e[0].get<long>();
            const long c = e[1].get<long>();
            if (r < 0 || c < 0 || r >= dim || c >= dim) {
                throw DimensionError("density matrix JSON: entry (" + std::to_string(r) + ", " + std::to_string(c) +
                                     ") outside dimension " + std::to_string(dim));
            }
            triplets.emplace_back(r, c, std::complex<double>(e[2].get<double>(), e[3].get<double>()));
        }
        DensityMatrix::Sparse sp(dim, dim);
        sp.setFromTriplets(triplets.begin(), triplets.end());
        return DensityMatrix(cutoff, modes, std::move(sp), deficit);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("density matrix JSON: ") + e.what());
    }
}

namespace {

class AngleParser {
public:
    explicit AngleParser(const std::string& text) : s_(text) {}

    double parse()
    {
        const double v = expression();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + s_.substr(pos_) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& why) const
    {
        throw ConfigError("cannot parse angle \"" + s_ + "\": " + why);
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    double expression()
    {
        double v = term();
        for (;;) {
            if (eat('+')) v += term();
            else if (eat('-')) v -= term();
            else return v;
        }
    }

    // Juxtaposition multiplies, so "3pi" reads as 3 * pi.
    double term()
    {
        double v = unary();
        for (;;) {
            skip();
            if (eat('*')) {
                v *= unary();
            } else if (eat('/')) {
                const double d = unary();
                if (d == 0.0) fail("division by zero");
                v /= d;
            } else if (pos_ < s_.size() && (s_[pos_] == 'p' || s_[pos_] == '(')) {
                v *= unary();
            } else {
                return v;
            }
        }
    }

    double unary()
    {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return primary();
    }

    double primary()
    {
        skip();
        if (eat('(')) {
            const double v = expression();
            if (!eat(')')) fail("missing ')'");
            return v;
        }
        if (s_.compare(pos_, 2, "pi") == 0) {
            pos_ += 2;
            return kPi;
        }
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail(pos_ < s_.size() ? "unexpected '" + s_.substr(pos_) + "'" : "missing value");
        if (!std::isfinite(v)) fail("non-finite value");
        pos_ += static_cast<std::size_t>(end - begin);
        return v;
    }

    std::string s_;
    std::size_t pos_ = 0;
};

std::vector<std::string> split(const std::string& s, char sep)
{
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

} // namespace

double parse_angle(const std::string& text)
{
    return AngleParser(text).parse();
}

std::vector<double> parse_values(const std::string& raw)
{
    std::string text = raw;
    if (!text.empty() && text.front() == '{' && text.back() == '}') text = text.substr(1, text.size() - 2);
    if (text.find(':') != std::string::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) throw ConfigError("range \"" + raw + "\" must be start:stop:step");
        const double a = parse_angle(parts[0]);
        const double b = parse_angle(parts[1]);
        const double step = parse_angle(parts[2]);
        if (!(step > 0.0) || b < a) throw ConfigError("range \"" + raw + "\" needs step > 0 and stop >= start");
        const auto n = static_cast<long>(std::floor((b - a) / step + 0.5));
        if (n > 1000000) throw ConfigError("range \"" + raw + "\" has more than 10^6 points");
        std::vector<double> out;
        for (long i = 0; i <= n; ++i) out.push_back(a + step * static_cast<double>(i));
        return out;
    }
    std::vector<double> out;
    for (const auto& p : split(text, ',')) out.push_back(parse_angle(p));
    return out;
}

std::map<std::string, double> parse_assignments(const std::string& text)
{
    std::map<std::string, double> out;
    for (const auto& item : split(text, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key=value in \"" + item + "\"");
        std::string key = item.substr(0, eq);
        key.erase(0, key.find_first_not_of(' '));
        key.erase(key.find_last_not_of(' ') + 1);
        if (key.empty()) throw ConfigError("empty key in \"" + item + "\"");
        if (out.count(key)) throw ConfigError("key \"" + key + "\" given twice");
        out[key] = parse_angle(item.substr(eq + 1));
    }
    return out;
}

} // namespace tomobell
