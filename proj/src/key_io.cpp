#include <fstream>
#include <sstream>

#include "fuzzymark/embedder.hpp"
#include "fuzzymark/error.hpp"
#include "json.hpp"

namespace fuzzymark {

namespace {

using nlohmann::json;

const json& field(const json& doc, const char* name) {
    auto it = doc.find(name);
    if (it == doc.end()) throw Error(ErrorKind::Malformed, std::string("key file is missing field '") + name + "'");
    return *it;
}

template <class T>
T get_as(const json& doc, const char* name) {
    const json& value = field(doc, name);
    try {
        return value.get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorKind::Malformed, std::string("key field '") + name + "' has the wrong type");
    }
}

int get_int(const json& doc, const char* name) {
    const json& value = field(doc, name);
    if (!value.is_number_integer())
        throw Error(ErrorKind::Malformed, std::string("key field '") + name + "' must be an integer");
    return value.get<int>();
}

}  // namespace

std::string key_to_text(const WatermarkKey& key) {
    json positions = json::array();
    for (const Coord& c : key.positions) positions.push_back({c.row, c.col});
    json doc = {
        {"version", WatermarkKey::kVersion},
        {"filter", to_string(key.params.wavelet)},
        {"levels", key.params.levels},
        {"subband", key.params.subband.to_string()},
        {"tau", key.params.tau},
        {"n", key.n},
        {"t", key.t},
        {"wm_width", key.wm_width},
        {"wm_height", key.wm_height},
        {"img_width", key.img_width},
        {"img_height", key.img_height},
        {"positions", std::move(positions)},
        {"v", key.v},
        {"wm_perm", key.wm_perm},
    };
    // nlohmann::json prints doubles with the shortest round-trip representation.
    return doc.dump() + "\n";
}

WatermarkKey key_from_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Malformed, std::string("key file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorKind::Malformed, "key file must hold a single object");

    const int version = get_int(doc, "version");
    if (version != WatermarkKey::kVersion)
        throw Error(ErrorKind::VersionMismatch, "unsupported key version " + std::to_string(version) + " (expected " +
                                                    std::to_string(WatermarkKey::kVersion) + ")");

    WatermarkKey key;
    try {
        key.params.wavelet = parse_wavelet(get_as<std::string>(doc, "filter"));
        key.params.subband = SubbandId::parse(get_as<std::string>(doc, "subband"));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Parameter) throw;
        throw Error(ErrorKind::Malformed, std::string("key file: ") + e.what());
    }
    key.params.levels = get_int(doc, "levels");
    key.params.tau = get_int(doc, "tau");
    key.n = get_int(doc, "n");
    key.t = get_int(doc, "t");
    key.wm_width = get_int(doc, "wm_width");
    key.wm_height = get_int(doc, "wm_height");
    key.img_width = get_int(doc, "img_width");
    key.img_height = get_int(doc, "img_height");

    const json& positions = field(doc, "positions");
    if (!positions.is_array()) throw Error(ErrorKind::Malformed, "key field 'positions' must be an array");
    for (const json& entry : positions) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number_integer() || !entry[1].is_number_integer())
            throw Error(ErrorKind::Malformed, "key field 'positions' must hold [row, col] integer pairs");
        key.positions.push_back({entry[0].get<int>(), entry[1].get<int>()});
    }
    key.v = get_as<std::vector<double>>(doc, "v");
    key.wm_perm = get_as<std::vector<int>>(doc, "wm_perm");

    try {
        validate_key(key);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Parameter) throw Error(ErrorKind::CorruptKey, std::string("key file: ") + e.what());
        throw;
    }
    return key;
}

void save_key(const WatermarkKey& key, const std::filesystem::path& path) {
    const std::string text = key_to_text(key);
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open key file for writing: " + path.string());
    out << text;
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write failed: " + path.string());
}

WatermarkKey load_key(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open key file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return key_from_text(buffer.str());
}

}  // namespace fuzzymark
