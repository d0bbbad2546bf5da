#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sparserec/errors.hpp"
#include "sparserec/operators.hpp"
#include "sparserec/signals.hpp"
#include "sparserec/solvers.hpp"

namespace sparserec::io {

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open for writing: " + path.string());
    return out;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open for reading: " + path.string());
    return in;
}

/// Shortest round-trippable decimal for a double.
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out)
        throw IoError("write failed: " + path.string());
}

/// Strips blank and '#' comment lines; returns false at end of stream.
inline bool next_data_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        return true;
    }
    return false;
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ','))
        fields.push_back(field);
    return fields;
}

inline double parse_double(const std::string& s, const std::filesystem::path& path) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw IoError("trailing characters");
        return v;
    } catch (const IoError&) {
        throw IoError("bad numeric field '" + s + "' in " + path.string());
    } catch (const std::exception&) {
        throw IoError("bad numeric field '" + s + "' in " + path.string());
    }
}

inline std::size_t parse_index(const std::string& s, const std::filesystem::path& path) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size())
            throw IoError("trailing characters");
        return static_cast<std::size_t>(v);
    } catch (const IoError&) {
        throw IoError("bad index field '" + s + "' in " + path.string());
    } catch (const std::exception&) {
        throw IoError("bad index field '" + s + "' in " + path.string());
    }
}

/// Reads "# key=value" comment lines already consumed by the caller.
inline std::size_t comment_size_value(const std::string& line, const std::string& key,
                                      const std::filesystem::path& path) {
    const auto pos = line.find(key + "=");
    if (pos == std::string::npos)
        throw IoError("missing '" + key + "=' comment in " + path.string());
    std::string digits = line.substr(pos + key.size() + 1);
    const auto end = digits.find_first_not_of("0123456789");
    if (end != std::string::npos)
        digits.resize(end);
    return parse_index(digits, path);
}

} // namespace detail

/// One sample per line, full precision, no header.
inline void write_signal_csv(const std::filesystem::path& path, const Signal1D& f) {
    auto out = detail::open_out(path);
    for (double v : f.samples)
        out << detail::fmt(v) << '\n';
    detail::finish(out, path);
}

inline Signal1D read_signal_csv(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    Signal1D f;
    std::string line;
    while (detail::next_data_line(in, line))
        f.samples.push_back(detail::parse_double(line, path));
    if (f.samples.empty())
        throw IoError("empty signal file: " + path.string());
    return f;
}

/// "# rows=R cols=C" comment, then one CSV line per image row.
inline void write_image_csv(const std::filesystem::path& path, const Image2D& img) {
    auto out = detail::open_out(path);
    out << "# rows=" << img.rows << " cols=" << img.cols << '\n';
    for (std::size_t r = 0; r < img.rows; ++r) {
        for (std::size_t c = 0; c < img.cols; ++c) {
            if (c)
                out << ',';
            out << detail::fmt(img.at(r, c));
        }
        out << '\n';
    }
    detail::finish(out, path);
}

inline Image2D read_image_csv(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    std::string header;
    if (!std::getline(in, header) || header.empty() || header[0] != '#')
        throw IoError("missing image header in " + path.string());
    const std::size_t rows = detail::comment_size_value(header, "rows", path);
    const std::size_t cols = detail::comment_size_value(header, "cols", path);
    Image2D img = make_image(rows, cols);
    std::string line;
    for (std::size_t r = 0; r < rows; ++r) {
        if (!detail::next_data_line(in, line))
            throw IoError("truncated image file: " + path.string());
        const auto fields = detail::split_csv(line);
        if (fields.size() != cols)
            throw IoError("row width mismatch in " + path.string());
        for (std::size_t c = 0; c < cols; ++c)
            img.at(r, c) = detail::parse_double(fields[c], path);
    }
    return img;
}

/// Binary 8-bit PGM; values are clipped to [0, 1] then scaled to 0..255.
inline void write_pgm(const std::filesystem::path& path, const Image2D& img) {
    auto out = detail::open_out(path);
    out << "P5\n" << img.cols << ' ' << img.rows << "\n255\n";
    std::vector<unsigned char> bytes(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        const double v = std::min(1.0, std::max(0.0, img.pixels[i]));
        bytes[i] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    detail::finish(out, path);
}

inline Image2D read_pgm(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    std::string magic;
    in >> magic;
    if (magic != "P5")
        throw IoError("not a binary PGM: " + path.string());
    std::size_t cols = 0, rows = 0, maxval = 0;
    in >> cols >> rows >> maxval;
    if (!in || maxval != 255 || rows == 0 || cols == 0)
        throw IoError("unsupported PGM header in " + path.string());
    in.get();
    std::vector<unsigned char> bytes(rows * cols);
    in.read(reinterpret_cast<char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (static_cast<std::size_t>(in.gcount()) != bytes.size())
        throw IoError("truncated PGM data in " + path.string());
    Image2D img = make_image(rows, cols);
    for (std::size_t i = 0; i < bytes.size(); ++i)
        img.pixels[i] = static_cast<double>(bytes[i]) / 255.0;
    return img;
}

/// "# n=N" comment, "index,value" header, one observed sample per line.
inline void write_observation_csv(const std::filesystem::path& path,
                                  const Observation1D& g) {
    auto out = detail::open_out(path);
    out << "# n=" << g.pattern.n << '\n' << "index,value\n";
    for (std::size_t i = 0; i < g.values.size(); ++i)
        out << g.pattern.indices[i] << ',' << detail::fmt(g.values[i]) << '\n';
    detail::finish(out, path);
}

inline Observation1D read_observation_csv(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    std::string header;
    if (!std::getline(in, header) || header.empty() || header[0] != '#')
        throw IoError("missing observation header in " + path.string());
    const std::size_t n = detail::comment_size_value(header, "n", path);
    std::string line;
    if (!detail::next_data_line(in, line) || line != "index,value")
        throw IoError("missing 'index,value' header in " + path.string());
    Observation1D g;
    g.pattern.n = n;
    while (detail::next_data_line(in, line)) {
        const auto fields = detail::split_csv(line);
        if (fields.size() != 2)
            throw IoError("bad observation row in " + path.string());
        const std::size_t idx = detail::parse_index(fields[0], path);
        if (idx >= n)
            throw IoError("index out of range in " + path.string());
        g.pattern.indices.push_back(idx);
        g.values.push_back(detail::parse_double(fields[1], path));
    }
    if (g.values.empty())
        throw IoError("empty observation file: " + path.string());
    for (std::size_t i = 1; i < g.pattern.indices.size(); ++i)
        if (g.pattern.indices[i] <= g.pattern.indices[i - 1])
            throw IoError("indices not strictly increasing in " + path.string());
    return g;
}

/// "# n=N" comment, "u,v" header, member cells in row-major order.
inline void write_mask_csv(const std::filesystem::path& path, const RadialMask& mask) {
    auto out = detail::open_out(path);
    out << "# n=" << mask.n << '\n' << "u,v\n";
    for (std::size_t idx : mask.order)
        out << idx / mask.n << ',' << idx % mask.n << '\n';
    detail::finish(out, path);
}

inline RadialMask read_mask_csv(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    std::string header;
    if (!std::getline(in, header) || header.empty() || header[0] != '#')
        throw IoError("missing mask header in " + path.string());
    const std::size_t n = detail::comment_size_value(header, "n", path);
    std::string line;
    if (!detail::next_data_line(in, line) || line != "u,v")
        throw IoError("missing 'u,v' header in " + path.string());
    RadialMask mask;
    mask.n = n;
    mask.cells.assign(n * n, 0);
    while (detail::next_data_line(in, line)) {
        const auto fields = detail::split_csv(line);
        if (fields.size() != 2)
            throw IoError("bad mask row in " + path.string());
        const std::size_t u = detail::parse_index(fields[0], path);
        const std::size_t v = detail::parse_index(fields[1], path);
        if (u >= n || v >= n)
            throw IoError("mask cell out of range in " + path.string());
        const std::size_t idx = u * n + v;
        if (mask.cells[idx])
            throw IoError("duplicate mask cell in " + path.string());
        mask.cells[idx] = 1;
        mask.order.push_back(idx);
    }
    if (mask.order.empty())
        throw IoError("empty mask file: " + path.string());
    for (std::size_t i = 1; i < mask.order.size(); ++i)
        if (mask.order[i] <= mask.order[i - 1])
            throw IoError("mask cells not in row-major order in " + path.string());
    return mask;
}

/// Mask rendered as a PGM with member cells white.
inline void write_mask_pgm(const std::filesystem::path& path, const RadialMask& mask) {
    Image2D img = make_image(mask.n, mask.n);
    for (std::size_t i = 0; i < mask.cells.size(); ++i)
        img.pixels[i] = mask.cells[i] ? 1.0 : 0.0;
    write_pgm(path, img);
}

/// "# n=N" comment, "u,v,re,im" header, rows follow mask.order.
inline void write_observation_csv(const std::filesystem::path& path,
                                  const Observation2D& g) {
    auto out = detail::open_out(path);
    out << "# n=" << g.mask.n << '\n' << "u,v,re,im\n";
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        const std::size_t idx = g.mask.order[i];
        out << idx / g.mask.n << ',' << idx % g.mask.n << ','
            << detail::fmt(g.values[i].real()) << ',' << detail::fmt(g.values[i].imag())
            << '\n';
    }
    detail::finish(out, path);
}

/// Reads a 2D observation and checks its cells match the mask exactly.
inline Observation2D read_observation_csv(const std::filesystem::path& path,
                                          const RadialMask& mask) {
    auto in = detail::open_in(path);
    std::string header;
    if (!std::getline(in, header) || header.empty() || header[0] != '#')
        throw IoError("missing observation header in " + path.string());
    const std::size_t n = detail::comment_size_value(header, "n", path);
    if (n != mask.n)
        throw ShapeError("observation grid size differs from mask");
    std::string line;
    if (!detail::next_data_line(in, line) || line != "u,v,re,im")
        throw IoError("missing 'u,v,re,im' header in " + path.string());
    Observation2D g;
    g.mask = mask;
    std::size_t row = 0;
    while (detail::next_data_line(in, line)) {
        const auto fields = detail::split_csv(line);
        if (fields.size() != 4)
            throw IoError("bad observation row in " + path.string());
        const std::size_t u = detail::parse_index(fields[0], path);
        const std::size_t v = detail::parse_index(fields[1], path);
        if (u >= n || v >= n)
            throw IoError("cell out of range in " + path.string());
        if (row >= mask.order.size() || u * n + v != mask.order[row])
            throw ShapeError("observation cells differ from mask order");
        g.values.emplace_back(detail::parse_double(fields[2], path),
                              detail::parse_double(fields[3], path));
        ++row;
    }
    if (row != mask.order.size())
        throw ShapeError("observation cell count differs from mask");
    return g;
}

/// "iter,rel_change,residual,mse" with mse blank when untracked.
inline void write_trace_csv(const std::filesystem::path& path,
                            const std::vector<TraceRow>& trace) {
    auto out = detail::open_out(path);
    out << "iter,rel_change,residual,mse\n";
    for (const TraceRow& row : trace) {
        out << row.iter << ',' << detail::fmt(row.rel_change) << ','
            << detail::fmt(row.residual) << ',';
        if (row.mse)
            out << detail::fmt(*row.mse);
        out << '\n';
    }
    detail::finish(out, path);
}

} // namespace sparserec::io
