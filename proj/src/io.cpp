#include "moeadstn/io.hpp"

#include <fstream>
#include <sstream>

#include <zlib.h>

#include "moeadstn/errors.hpp"

namespace moeadstn {

namespace {

bool is_gzip(const std::filesystem::path& path) { return path.extension() == ".gz"; }

} // namespace

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (is_gzip(path)) {
        gzFile f = gzopen(path.string().c_str(), "wb6");
        if (f == nullptr) {
            throw IoError("cannot write " + path.string());
        }
        std::size_t done = 0;
        while (done < content.size()) {
            const auto chunk = static_cast<unsigned>(std::min<std::size_t>(content.size() - done, 1u << 20));
            if (gzwrite(f, content.data() + done, chunk) != static_cast<int>(chunk)) {
                gzclose(f);
                throw IoError("failed while writing " + path.string());
            }
            done += chunk;
        }
        if (gzclose(f) != Z_OK) {
            throw IoError("failed while closing " + path.string());
        }
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw IoError("failed while writing " + path.string());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    if (is_gzip(path)) {
        gzFile f = gzopen(path.string().c_str(), "rb");
        if (f == nullptr) {
            throw IoError("cannot read " + path.string());
        }
        std::string out;
        char buf[1 << 16];
        int n = 0;
        while ((n = gzread(f, buf, sizeof buf)) > 0) {
            out.append(buf, static_cast<std::size_t>(n));
        }
        gzclose(f);
        if (n < 0) {
            throw IoError("corrupt gzip stream in " + path.string());
        }
        return out;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace moeadstn
