#include "mukleene/report.hpp"

#include <cstdint>
#include <cstdio>

#include "json.hpp"
#include "mukleene/errors.hpp"

namespace mukleene {

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::string window_str(const RIv& w) {
  if (w.empty()) return "()";
  std::string s;
  s += w.lo_closed ? '[' : '(';
  s += w.lo.str();
  s += ", ";
  s += w.hi.str();
  s += w.hi_closed ? ']' : ')';
  return s;
}

RIv window_from_str(const std::string& s) {
  if (s == "()") return RIv{Rat(1), Rat(0), false, false};
  if (s.size() < 4) fail(Errc::format_error, "window too short: " + s);
  char open = s.front();
  char close = s.back();
  if ((open != '[' && open != '(') || (close != ']' && close != ')'))
    fail(Errc::format_error, "window delimiters: " + s);
  auto comma = s.find(", ");
  if (comma == std::string::npos)
    fail(Errc::format_error, "window separator: " + s);
  RIv w;
  w.lo = Rat::parse(s.substr(1, comma - 1));
  w.hi = Rat::parse(s.substr(comma + 2, s.size() - comma - 3));
  w.lo_closed = open == '[';
  w.hi_closed = close == ']';
  return w;
}

std::string RealiserReport::canonical_text() const {
  nlohmann::json j;
  j["realiser"] = realiser;
  j["input"] = input_digest;
  j["precision"] = precision;
  nlohmann::json payload_json;
  try {
    payload_json = nlohmann::json::parse(payload);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::format_error, std::string("report payload: ") + e.what());
  }
  j["payload"] = payload_json;
  nlohmann::json qs = nlohmann::json::array();
  for (const auto& w : query_log) qs.push_back(window_str(w));
  j["queries"] = qs;
  return j.dump(2) + "\n";
}

RealiserReport RealiserReport::parse(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::format_error, std::string("report: ") + e.what());
  }
  if (!j.is_object()) fail(Errc::format_error, "report: not an object");
  for (const char* key : {"realiser", "input", "payload", "queries", "precision"})
    if (!j.contains(key))
      fail(Errc::format_error, std::string("report: missing ") + key);
  RealiserReport r;
  r.realiser = j.at("realiser").get<std::string>();
  r.input_digest = j.at("input").get<std::string>();
  r.payload = j.at("payload").dump(2);
  r.precision = j.at("precision").get<long>();
  for (const auto& q : j.at("queries"))
    r.query_log.push_back(window_from_str(q.get<std::string>()));
  return r;
}

}  // namespace mukleene
