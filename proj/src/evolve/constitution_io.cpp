#include "ace/evolve/constitution_io.hpp"

#include <fstream>
#include <sstream>

#include "ace/util/strings.hpp"

namespace ace::evolve {

using core::Constitution;
using core::Polarity;
using core::Strategy;

std::string constitution_to_text(const Constitution& c) {
    std::string out = "## Good Strategies\n";
    for (const auto& s : c.strategies)
        if (s.polarity == Polarity::Good) out += "- " + s.title + ": " + s.body + "\n";
    out += "## Bad Strategies\n";
    for (const auto& s : c.strategies)
        if (s.polarity == Polarity::Bad) out += "- " + s.title + ": " + s.body + "\n";
    return out;
}

Constitution parse_constitution_text(const std::string& text) {
    Constitution c;
    std::istringstream in(text);
    std::string line;
    Polarity section = Polarity::Good;
    bool in_section = false;
    while (std::getline(in, line)) {
        std::string t = util::trim(line);
        if (t.empty()) continue;
        if (util::starts_with_ci(t, "##")) {
            std::string heading = util::to_lower(t);
            in_section = true;
            if (heading.find("good") != std::string::npos) section = Polarity::Good;
            else if (heading.find("bad") != std::string::npos) section = Polarity::Bad;
            else in_section = false; // unrelated heading; ignore its content
            continue;
        }
        if (!in_section) continue;
        if (t[0] != '-')
            throw ConstitutionParseError("expected '- Title: body', got: " + t);
        std::string item = util::trim(t.substr(1));
        std::size_t colon = item.find(':');
        if (colon == std::string::npos || colon == 0)
            throw ConstitutionParseError("strategy line lacks 'Title: body': " + t);
        Strategy s;
        s.polarity = section;
        s.title = util::trim(item.substr(0, colon));
        s.body = util::trim(item.substr(colon + 1));
        if (s.body.empty())
            throw ConstitutionParseError("strategy body is empty: " + s.title);
        c.strategies.push_back(std::move(s));
    }
    if (c.strategies.empty())
        throw ConstitutionParseError("no strategies found in constitution text");
    try {
        core::validate_constitution(c);
    } catch (const InvariantViolation& e) {
        throw ConstitutionParseError(e.what());
    }
    return c;
}

void save_constitution(const Constitution& c, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write constitution: " + path);
    out << constitution_to_text(c);
}

Constitution load_constitution(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read constitution: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_constitution_text(buf.str());
}

} // namespace ace::evolve
