#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace phishkit {

// Visually-confusable substitutions. The built-in set covers the digit and
// symbol lookalikes that survive plain-text email (o<->0, l/i<->1, e<->3,
// a<->@, s<->$); an extension file can add further pairs, including
// multi-byte confusables.
class HomoglyphTable {
public:
    HomoglyphTable() {
        add('o', "0");
        add('0', "o");
        add('l', "1");
        add('i', "1");
        add('1', "l");
        add('e', "3");
        add('3', "e");
        add('a', "@");
        add('@', "a");
        add('s', "$");
        add('$', "s");
    }

    // One "<ascii-char> <replacement>" pair per line; '#' starts a comment.
    void load_extension(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open homoglyph file: " + path);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            std::istringstream iss(line);
            std::string from, to;
            if (!(iss >> from >> to) || from.size() != 1)
                throw std::runtime_error("bad homoglyph line: " + line);
            add(from[0], to);
        }
    }

    const std::vector<std::string>* candidates(char c) const {
        const auto it = map_.find(c);
        return it == map_.end() ? nullptr : &it->second;
    }

private:
    void add(char from, std::string to) { map_[from].push_back(std::move(to)); }
    std::unordered_map<char, std::vector<std::string>> map_;
};

// QWERTY adjacency used by typo-style substitutions.
class KeyboardMap {
public:
    KeyboardMap() {
        static constexpr const char* kRows[] = {
            "q wa",      "w qeas",    "e wrsd",   "r etdf",   "t ryfg",   "y tugh",
            "u yihj",    "i uojk",    "o ipkl",   "p ol",     "a qwsz",   "s qweadzxc",
            "d werfsxcv", "f ertdgcvb", "g rtyfhvbn", "h tyugjbnm", "j yuihknm",
            "k uiojlm",  "l iopk",    "z asx",    "x zasdc",  "c xsdfv",  "v cdfgb",
            "b vfghn",   "n bghjm",   "m nhjk"};
        for (const char* row : kRows) neighbors_[row[0]] = row + 2;
    }

    // One "<key> <neighbors>" line per key, same layout as the built-in map.
    static KeyboardMap from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open keyboard map file: " + path);
        KeyboardMap m;
        m.neighbors_.clear();
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            std::istringstream iss(line);
            std::string key, adj;
            if (!(iss >> key >> adj) || key.size() != 1)
                throw std::runtime_error("bad keyboard map line: " + line);
            m.neighbors_[key[0]] = adj;
        }
        if (m.neighbors_.empty()) throw std::runtime_error("empty keyboard map: " + path);
        return m;
    }

    const std::string* neighbors(char c) const {
        const auto it = neighbors_.find(c);
        return it == neighbors_.end() ? nullptr : &it->second;
    }

private:
    std::unordered_map<char, std::string> neighbors_;
};

}  // namespace phishkit
