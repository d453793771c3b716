#include <fstream>
#include <sstream>

#include "augens/data/dataset.hpp"
#include "augens/error.hpp"

namespace augens::data {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, sep)) parts.push_back(cur);
    if (!line.empty() && line.back() == sep) parts.emplace_back();
    return parts;
}

int parse_int(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    fail(ErrorCode::parse, "bad " + what + ": '" + text + "'");
}

}  // namespace

void write_manifest(const DatasetManifest& manifest, std::ostream& os) {
    os << "# augens manifest v1\n";
    os << "# classes:";
    for (const auto& c : manifest.classes) os << '\t' << c;
    os << "\n# protocol: "
       << (manifest.protocol.kind == Protocol::Kind::kfold ? "kfold " + std::to_string(manifest.protocol.k)
                                                           : std::string("train_test"))
       << "\n";
    for (const auto& note : manifest.notes) os << "# note: " << note << "\n";
    bool grouped = false;
    for (const auto& s : manifest.samples) grouped = grouped || !s.group.empty();
    for (const auto& s : manifest.samples) {
        os << s.id << '\t' << s.relative_path << '\t' << s.label << '\t'
           << (s.origin == Origin::original ? std::string("original") : "app" + std::to_string(s.app_id)) << '\t'
           << (s.parent_id.empty() ? std::string("-") : s.parent_id) << '\t' << s.fold;
        if (grouped) os << '\t' << (s.group.empty() ? std::string("-") : s.group);
        os << '\n';
    }
}

void write_manifest(const DatasetManifest& manifest, const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    require(static_cast<bool>(os), ErrorCode::io, "cannot write manifest " + path.string());
    write_manifest(manifest, os);
    require(static_cast<bool>(os), ErrorCode::io, "write failed: " + path.string());
}

DatasetManifest read_manifest(std::istream& is, const fs::path& root) {
    DatasetManifest m;
    m.root = root;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("# classes:", 0) == 0) {
                auto parts = split(line.substr(10), '\t');
                for (auto& p : parts) {
                    if (!p.empty()) m.classes.push_back(p);
                }
            } else if (line.rfind("# protocol: ", 0) == 0) {
                const std::string proto = line.substr(12);
                if (proto == "train_test") {
                    m.protocol = Protocol::train_test();
                } else {
                    require(proto.rfind("kfold ", 0) == 0, ErrorCode::parse, "bad protocol line: " + line);
                    m.protocol = Protocol::kfold(static_cast<std::size_t>(parse_int(proto.substr(6), "fold count")));
                }
            } else if (line.rfind("# note: ", 0) == 0) {
                m.notes.push_back(line.substr(8));
            }
            continue;
        }
        const auto f = split(line, '\t');
        require(f.size() == 6 || f.size() == 7, ErrorCode::parse,
                "manifest line " + std::to_string(lineno) + ": expected 6 or 7 fields");
        Sample s;
        s.id = f[0];
        s.relative_path = f[1];
        s.label = parse_int(f[2], "label");
        if (f[3] == "original") {
            s.origin = Origin::original;
        } else {
            require(f[3].rfind("app", 0) == 0, ErrorCode::parse, "bad origin '" + f[3] + "'");
            s.origin = Origin::augmented;
            s.app_id = parse_int(f[3].substr(3), "origin app id");
        }
        s.parent_id = f[4] == "-" ? std::string() : f[4];
        s.fold = parse_int(f[5], "fold");
        if (f.size() == 7 && f[6] != "-") s.group = f[6];
        m.samples.push_back(std::move(s));
    }
    validate(m);
    return m;
}

DatasetManifest read_manifest(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    require(static_cast<bool>(is), ErrorCode::io, "cannot open manifest " + path.string());
    return read_manifest(is, path.parent_path());
}

}  // namespace augens::data
