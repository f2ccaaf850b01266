#include "pep/trace_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace pep {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t end = line.find(sep, start);
        out.push_back(line.substr(start, end - start));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return out;
}

std::size_t toIndex(const std::string& s) {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("not a number: " + s);
    return static_cast<std::size_t>(v);
}

}  // namespace

void writeTrace(std::ostream& out, const Trace& t, const std::filesystem::path& dictionary) {
    out << "#trace|" << t.seed << "|";
    for (std::size_t i = 0; i < t.interventions.size(); ++i) out << (i ? ";" : "") << t.interventions[i];
    out << "\n";
    if (!dictionary.empty()) out << "#dictionary|" << dictionary.string() << "\n";
    for (const auto& [id, st] : t.finalStates) {
        out << "#agent|" << id << "|" << st.secretKey.render() << "|" << st.publicKey.render() << "\n";
        for (const auto& [peer, rec] : st.peers) {
            out << "#peer|" << id << "|" << peer << "|" << ratingName(rec.rating) << "|"
                << (rec.pubkey ? rec.pubkey->render() : "-") << "\n";
        }
    }
    for (const auto& s : t.secrets.entries) {
        out << "#secret|" << s.session << "|" << s.sender << "|" << s.recipient << "|"
            << (s.afterHandshakeOk ? 1 : 0) << "|" << s.secret.render() << "\n";
    }
    for (const auto& k : t.adversaryKnowledge.base()) out << "#knowledge|" << k.render() << "\n";
    for (const auto& te : t.events) out << te.index << "|" << te.session << "|" << renderEvent(te.event) << "\n";
}

std::string traceToString(const Trace& t, const std::filesystem::path& dictionary) {
    std::ostringstream os;
    writeTrace(os, t, dictionary);
    return os.str();
}

LoadedTrace readTrace(std::istream& in) {
    LoadedTrace lt;
    Trace& t = lt.trace;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto f = split(line, '|');
        try {
            const std::string& tag = f[0];
            auto need = [&](std::size_t n) {
                if (f.size() != n) throw std::invalid_argument("expected " + std::to_string(n) + " fields");
            };
            if (tag == "#trace") {
                need(3);
                t.seed = toIndex(f[1]);
                if (!f[2].empty()) t.interventions = split(f[2], ';');
            } else if (tag == "#dictionary") {
                need(2);
                lt.dictionary = f[1];
            } else if (tag == "#agent") {
                need(4);
                PeerState st{f[1], parseTerm(f[2]), parseTerm(f[3]), {}, {}, 0};
                t.finalStates.insert_or_assign(f[1], std::move(st));
            } else if (tag == "#peer") {
                need(5);
                auto it = t.finalStates.find(f[1]);
                if (it == t.finalStates.end()) throw std::invalid_argument("peer before agent " + f[1]);
                auto rating = ratingFromName(f[3]);
                if (!rating) throw std::invalid_argument("unknown rating " + f[3]);
                IdentityRecord rec{f[2], f[2], std::nullopt, *rating};
                if (f[4] != "-") rec.pubkey = parseTerm(f[4]);
                it->second.peers.insert_or_assign(f[2], std::move(rec));
            } else if (tag == "#secret") {
                need(6);
                t.secrets.entries.push_back({parseTerm(f[5]), toIndex(f[1]), f[2], f[3], f[4] == "1"});
            } else if (tag == "#knowledge") {
                need(2);
                t.adversaryKnowledge.learn(parseTerm(f[1]));
            } else if (!tag.empty() && tag[0] == '#') {
                throw std::invalid_argument("unknown record " + tag);
            } else {
                if (f.size() < 3) throw std::invalid_argument("short event line");
                auto kind = eventKindFromName(f[2]);
                if (!kind) throw std::invalid_argument("unknown event " + f[2]);
                const auto& sig = eventSignature(*kind);
                if (f.size() != 3 + sig.size()) throw std::invalid_argument("wrong arity for " + f[2]);
                std::vector<Value> args;
                for (std::size_t i = 0; i < sig.size(); ++i) {
                    if (sig[i] == ArgType::Agent) args.emplace_back(f[3 + i]);
                    else args.emplace_back(parseTerm(f[3 + i]));
                }
                t.events.push_back({toIndex(f[0]), toIndex(f[1]), Event(*kind, std::move(args))});
            }
        } catch (const std::exception& e) {
            throw TraceFormatError("line " + std::to_string(lineNo) + ": " + e.what());
        }
    }
    return lt;
}

LoadedTrace readTrace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw TraceFormatError("cannot open " + path.string());
    return readTrace(in);
}

void writeBranch(std::ostream& out, std::size_t branch, const Trace& t, const std::filesystem::path& dictionary) {
    out << "#branch|" << branch << "\n";
    writeTrace(out, t, dictionary);
}

std::vector<LoadedTrace> readTraceSet(std::istream& in) {
    std::vector<LoadedTrace> out;
    std::string line, chunk;
    bool sawHeader = false;
    auto flush = [&] {
        std::istringstream is(chunk);
        out.push_back(readTrace(is));
        chunk.clear();
    };
    while (std::getline(in, line)) {
        if (line.starts_with("#branch|")) {
            if (sawHeader) flush();
            sawHeader = true;
            continue;
        }
        chunk += line;
        chunk += '\n';
    }
    if (sawHeader || !chunk.empty()) flush();
    return out;
}

std::vector<LoadedTrace> readTraceSet(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw TraceFormatError("cannot open " + path.string());
    return readTraceSet(in);
}

}  // namespace pep
