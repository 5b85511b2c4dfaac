#include "snnq/serial.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace snnq {

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(IoErrc::FileSystem, 0, "cannot open " + path);
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError(IoErrc::FileSystem, 0, "read failed for " + path);
    return buf;
}

void write_file_atomic(const std::string& path, const void* data, std::size_t size) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError(IoErrc::FileSystem, 0, "cannot open " + tmp + " for writing");
        out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
        out.flush();
        if (!out) throw IoError(IoErrc::FileSystem, 0, "write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError(IoErrc::FileSystem, 0, "rename to " + path + " failed: " + ec.message());
    }
}

}  // namespace snnq
