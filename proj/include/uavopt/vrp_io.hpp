#pragma once

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "uavopt/errors.hpp"
#include "uavopt/routing.hpp"

namespace uavopt {

// A CVRP-style text instance in canonical order: node 0 is the depot, ids are
// renumbered 1..dimension with the depot as id 1.
struct RawInstance {
    std::string name;
    int dimension = 0;
    double capacity = 0.0;  // original vehicle capacity; ignored by the drone model
    std::vector<NodePoint> nodes;
    std::vector<double> demands;
    int depot_id = 1;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

inline double parse_number(const std::string& token, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected a number, got '" + token + "'", line);
    }
}

}  // namespace detail

// Parses the NAME/DIMENSION/CAPACITY/NODE_COORD_SECTION/DEMAND_SECTION/
// DEPOT_SECTION/EOF layout. Unknown header lines (COMMENT, TYPE, ...) are
// skipped; missing sections and malformed tokens raise ParseError with the
// offending line number.
inline RawInstance parse_vrp(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;

    std::string name;
    int dimension = -1;
    double capacity = -1.0;
    std::map<int, std::pair<double, double>> coords;
    std::map<int, double> demands;
    std::vector<int> depot_ids;
    bool saw_coords = false, saw_demands = false, saw_depot = false, saw_eof = false;

    enum class Section { Header, Coords, Demands, Depot, Done };
    Section section = Section::Header;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        if (t == "EOF") {
            saw_eof = true;
            section = Section::Done;
            continue;
        }
        if (section == Section::Done)
            throw ParseError("content after EOF", line_no);

        if (t == "NODE_COORD_SECTION") {
            section = Section::Coords;
            saw_coords = true;
            continue;
        }
        if (t == "DEMAND_SECTION") {
            section = Section::Demands;
            saw_demands = true;
            continue;
        }
        if (t == "DEPOT_SECTION") {
            section = Section::Depot;
            saw_depot = true;
            continue;
        }

        if (section == Section::Header) {
            const auto colon = t.find(':');
            if (colon == std::string::npos)
                throw ParseError("expected 'KEY : VALUE' header, got '" + t + "'", line_no);
            const std::string key = detail::trim(t.substr(0, colon));
            const std::string value = detail::trim(t.substr(colon + 1));
            if (key == "NAME") name = value;
            else if (key == "DIMENSION") dimension = static_cast<int>(detail::parse_number(value, line_no));
            else if (key == "CAPACITY") capacity = detail::parse_number(value, line_no);
            // COMMENT, TYPE, EDGE_WEIGHT_TYPE and friends carry no data we use
            continue;
        }

        std::istringstream fields(t);
        std::vector<std::string> tokens;
        for (std::string tok; fields >> tok;) tokens.push_back(tok);

        if (section == Section::Coords) {
            if (tokens.size() != 3) throw ParseError("coordinate line needs 'id x y'", line_no);
            const int id = static_cast<int>(detail::parse_number(tokens[0], line_no));
            coords[id] = {detail::parse_number(tokens[1], line_no),
                          detail::parse_number(tokens[2], line_no)};
        } else if (section == Section::Demands) {
            if (tokens.size() != 2) throw ParseError("demand line needs 'id demand'", line_no);
            const int id = static_cast<int>(detail::parse_number(tokens[0], line_no));
            if (!coords.count(id))
                throw ParseError("demand for unknown node " + std::to_string(id), line_no);
            demands[id] = detail::parse_number(tokens[1], line_no);
        } else if (section == Section::Depot) {
            for (const std::string& tok : tokens) {
                const int id = static_cast<int>(detail::parse_number(tok, line_no));
                if (id == -1) continue;
                depot_ids.push_back(id);
            }
        }
    }

    if (name.empty()) throw ParseError("missing NAME header");
    if (dimension < 0) throw ParseError("missing DIMENSION header");
    if (capacity < 0) throw ParseError("missing CAPACITY header");
    if (!saw_coords) throw ParseError("missing NODE_COORD_SECTION");
    if (!saw_demands) throw ParseError("missing DEMAND_SECTION");
    if (!saw_depot) throw ParseError("missing DEPOT_SECTION");
    if (!saw_eof) throw ParseError("missing EOF marker");
    if (static_cast<int>(coords.size()) != dimension)
        throw ParseError("DIMENSION is " + std::to_string(dimension) + " but " +
                         std::to_string(coords.size()) + " coordinates were given");
    if (demands.size() != coords.size()) throw ParseError("demand count does not match node count");
    if (depot_ids.empty()) throw ParseError("DEPOT_SECTION names no depot");

    const int depot = depot_ids.front();
    if (!coords.count(depot)) throw ParseError("depot id " + std::to_string(depot) + " is unknown");

    RawInstance raw;
    raw.name = name;
    raw.dimension = dimension;
    raw.capacity = capacity;
    raw.nodes.push_back(NodePoint{1, coords[depot].first, coords[depot].second});
    raw.demands.push_back(demands[depot]);
    int next_id = 2;
    for (const auto& [id, xy] : coords) {
        if (id == depot) continue;
        raw.nodes.push_back(NodePoint{next_id++, xy.first, xy.second});
        raw.demands.push_back(demands[id]);
    }
    return raw;
}

inline std::string emit_vrp(const RawInstance& raw) {
    std::ostringstream out;
    out << "NAME : " << raw.name << "\n";
    out << "TYPE : CVRP\n";
    out << "DIMENSION : " << raw.dimension << "\n";
    out << "EDGE_WEIGHT_TYPE : EUC_2D\n";
    out << "CAPACITY : " << raw.capacity << "\n";
    out << "NODE_COORD_SECTION\n";
    for (std::size_t i = 0; i < raw.nodes.size(); ++i)
        out << (i + 1) << " " << raw.nodes[i].x << " " << raw.nodes[i].y << "\n";
    out << "DEMAND_SECTION\n";
    for (std::size_t i = 0; i < raw.demands.size(); ++i)
        out << (i + 1) << " " << raw.demands[i] << "\n";
    out << "DEPOT_SECTION\n1\n-1\nEOF\n";
    return out.str();
}

// Maps the original integer demands into the drone's payload range:
// r_i = d_i mod L, with 1.5 kg substituted when the remainder vanishes.
inline double adapt_demand(double original, double payload_capacity) {
    if (original < 0) throw InputError("adapt_demand: negative demand");
    const double r = std::fmod(original, payload_capacity);
    return r == 0.0 ? 1.5 : r;
}

inline RoutingInstance adapt_demands(const RawInstance& raw, const DroneParams& params) {
    if (!(params.payload_capacity > 0)) throw InputError("adapt_demands: payload capacity must be positive");
    if (params.payload_capacity < 1.5)
        throw InputError("adapt_demands: payload capacity below the 1.5 kg substitute demand");
    std::vector<double> adapted;
    adapted.reserve(raw.demands.size());
    adapted.push_back(0.0);  // depot
    for (std::size_t i = 1; i < raw.demands.size(); ++i)
        adapted.push_back(adapt_demand(raw.demands[i], params.payload_capacity));
    return build_instance(raw.nodes, std::move(adapted), params);
}

}  // namespace uavopt
