#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace staged {

// ---------------------------------------------------------------------------
// Errors. Every failure carries a stable machine-readable kind so the CLI can
// emit one parsable error line.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(msg), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define STAGED_DEFINE_ERROR(Name)                                             \
    class Name : public Error {                                               \
    public:                                                                    \
        explicit Name(const std::string& msg) : Error(#Name, msg) {}           \
    }

STAGED_DEFINE_ERROR(IncompleteGrid);
STAGED_DEFINE_ERROR(DuplicateEntry);
STAGED_DEFINE_ERROR(DomainError);
STAGED_DEFINE_ERROR(UnknownGene);
STAGED_DEFINE_ERROR(BinningError);
STAGED_DEFINE_ERROR(NumericalBlowup);
STAGED_DEFINE_ERROR(WarmupViolation);
STAGED_DEFINE_ERROR(NothingToPredict);
STAGED_DEFINE_ERROR(NothingToScore);
STAGED_DEFINE_ERROR(SchemaMismatch);
STAGED_DEFINE_ERROR(ParseError);
STAGED_DEFINE_ERROR(IoError);

#undef STAGED_DEFINE_ERROR

// ---------------------------------------------------------------------------
// Small geometry / numeric helpers
// ---------------------------------------------------------------------------

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double dist(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// Shortest round-trip decimal representation; parse(fmt(x)) == x exactly.
inline std::string fmt_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const std::string& what) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ParseError("bad numeric value for " + what + ": '" + std::string(s) + "'");
    return v;
}

inline long parse_long(std::string_view s, const std::string& what) {
    long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ParseError("bad integer value for " + what + ": '" + std::string(s) + "'");
    return v;
}

inline std::string_view trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            break;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Deterministic chunked parallel map: splits [0, n) into contiguous ranges,
// each worker writes only its own slots, so results never depend on the
// worker count.
// ---------------------------------------------------------------------------

template <class Fn>
void parallel_for(size_t n, int workers, Fn&& fn) {
    if (workers <= 1 || n < 2) {
        fn(size_t{0}, n);
        return;
    }
    size_t w = std::min<size_t>(static_cast<size_t>(workers), n);
    size_t chunk = (n + w - 1) / w;
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (size_t i = 0; i < w; ++i) {
        size_t b = i * chunk;
        size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace staged
