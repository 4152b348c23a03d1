#include "edgecap/io.hpp"

#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

#include "edgecap/decimal.hpp"
#include "json.hpp"
#include "text.hpp"

namespace edgecap::io {
namespace {

using decimal::format_scaled;
using decimal::parse_scaled;

constexpr int kMs = 3;     // seconds -> milliseconds
constexpr int kMbps = -6;  // bits/s -> Mbit/s

// Flat JSON object writer that takes numbers as preformatted text.
class ObjectWriter {
 public:
  ObjectWriter& str(std::string_view key, std::string_view value) {
    return raw(key, nlohmann::json(std::string(value)).dump());
  }
  ObjectWriter& num(std::string_view key, std::string_view text) { return raw(key, text); }
  ObjectWriter& uint(std::string_view key, std::uint64_t value) {
    return raw(key, std::to_string(value));
  }
  ObjectWriter& boolean(std::string_view key, bool value) {
    return raw(key, value ? "true" : "false");
  }
  std::string done(std::string_view indent = "") const {
    return "{\n" + body(std::string(indent) + "  ") + std::string(indent) + "}";
  }

 private:
  ObjectWriter& raw(std::string_view key, std::string_view text) {
    fields_.emplace_back(nlohmann::json(std::string(key)).dump(), std::string(text));
    return *this;
  }
  std::string body(const std::string& indent) const {
    std::string out;
    for (std::size_t i = 0; i < fields_.size(); ++i) {
      out += indent + fields_[i].first + ": " + fields_[i].second;
      out += i + 1 < fields_.size() ? ",\n" : "\n";
    }
    return out;
  }
  std::vector<std::pair<std::string, std::string>> fields_;
};

std::string array_of(const std::vector<std::string>& objects) {
  if (objects.empty()) return "[]\n";
  std::string out = "[\n";
  for (std::size_t i = 0; i < objects.size(); ++i) {
    out += "  " + objects[i];
    out += i + 1 < objects.size() ? ",\n" : "\n";
  }
  return out + "]\n";
}

// --- flat JSON reading ---------------------------------------------------

struct RawValue {
  enum class Kind { string, number, boolean, null } kind;
  std::string text;
};
using FlatObject = std::map<std::string, RawValue>;

class FlatSax : public nlohmann::json_sax<nlohmann::json> {
 public:
  std::vector<FlatObject> objects;
  bool top_is_array = false;
  std::string error;

  bool null() override { return value({RawValue::Kind::null, "null"}); }
  bool boolean(bool v) override { return value({RawValue::Kind::boolean, v ? "true" : "false"}); }
  bool number_integer(number_integer_t v) override {
    return value({RawValue::Kind::number, std::to_string(v)});
  }
  bool number_unsigned(number_unsigned_t v) override {
    return value({RawValue::Kind::number, std::to_string(v)});
  }
  bool number_float(number_float_t, const string_t& s) override {
    return value({RawValue::Kind::number, s});
  }
  bool string(string_t& s) override { return value({RawValue::Kind::string, s}); }
  bool binary(binary_t&) override { return fail("binary values are not supported"); }
  bool start_object(std::size_t) override {
    if (in_object_) return fail("nested objects are not supported");
    if (depth_ == 1 && !top_is_array) return fail("unexpected object");
    in_object_ = true;
    ++depth_;
    objects.emplace_back();
    return true;
  }
  bool key(string_t& k) override {
    key_ = k;
    return true;
  }
  bool end_object() override {
    in_object_ = false;
    --depth_;
    return true;
  }
  bool start_array(std::size_t) override {
    if (depth_ != 0) return fail("nested arrays are not supported");
    top_is_array = true;
    ++depth_;
    return true;
  }
  bool end_array() override {
    --depth_;
    return true;
  }
  bool parse_error(std::size_t, const std::string&,
                   const nlohmann::detail::exception& ex) override {
    return fail(ex.what());
  }

 private:
  bool value(RawValue v) {
    if (!in_object_) return fail("expected an object");
    objects.back()[key_] = std::move(v);
    return true;
  }
  bool fail(std::string message) {
    error = std::move(message);
    return false;
  }
  int depth_ = 0;
  bool in_object_ = false;
  std::string key_;
};

std::vector<FlatObject> parse_flat(std::string_view text, bool want_array) {
  FlatSax sax;
  const bool ok = nlohmann::json::sax_parse(text.begin(), text.end(), &sax);
  if (!ok) throw std::runtime_error("invalid JSON: " + sax.error);
  if (sax.top_is_array != want_array) {
    throw std::runtime_error(want_array ? "expected a JSON array of objects"
                                        : "expected a JSON object");
  }
  return std::move(sax.objects);
}

const RawValue& field(const FlatObject& obj, const std::string& key, RawValue::Kind kind) {
  auto it = obj.find(key);
  if (it == obj.end()) throw std::runtime_error("missing field '" + key + "'");
  if (it->second.kind != kind) throw std::runtime_error("field '" + key + "' has the wrong type");
  return it->second;
}

std::string get_string(const FlatObject& obj, const std::string& key) {
  return field(obj, key, RawValue::Kind::string).text;
}

double get_number(const FlatObject& obj, const std::string& key, int shift) {
  return parse_scaled(field(obj, key, RawValue::Kind::number).text, shift);
}

std::uint64_t parse_uint(std::string_view text, const std::string& what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::runtime_error(what + " is not a nonnegative integer: '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t get_uint(const FlatObject& obj, const std::string& key) {
  return parse_uint(field(obj, key, RawValue::Kind::number).text, "field '" + key + "'");
}

bool get_bool(const FlatObject& obj, const std::string& key) {
  return field(obj, key, RawValue::Kind::boolean).text == "true";
}

Architecture architecture_from(const std::string& text) {
  auto arch = parse_architecture(text);
  if (!arch) throw std::runtime_error("unknown architecture '" + text + "'");
  return *arch;
}

// --- sweep cells ---------------------------------------------------------

std::vector<std::string> cell_fields(const sweep::AchievabilityCell& c) {
  return {std::to_string(c.users),
          std::to_string(c.aps),
          std::string(to_string(c.architecture)),
          c.platform,
          format_scaled(c.goodput, kMbps),
          std::to_string(c.n_per_ap),
          format_scaled(c.breakdown.wireless, kMs),
          format_scaled(c.breakdown.processing, kMs),
          format_scaled(c.breakdown.backhaul, kMs),
          format_scaled(c.breakdown.total, kMs),
          c.best.value_or("none")};
}

std::vector<std::string> sweep_columns() {
  return detail::split(kSweepCsvHeader, ',');
}

sweep::AchievabilityCell cell_from(const std::vector<std::string>& f) {
  sweep::AchievabilityCell c;
  c.users = parse_uint(f[0], "users");
  c.aps = parse_uint(f[1], "aps");
  c.architecture = architecture_from(f[2]);
  c.platform = f[3];
  c.goodput = parse_scaled(f[4], kMbps);
  c.n_per_ap = parse_uint(f[5], "n_per_ap");
  c.breakdown.wireless = parse_scaled(f[6], kMs);
  c.breakdown.processing = parse_scaled(f[7], kMs);
  c.breakdown.backhaul = parse_scaled(f[8], kMs);
  c.breakdown.total = parse_scaled(f[9], kMs);
  if (f[10] != "none") c.best = f[10];
  return c;
}

}  // namespace

std::string profile_to_json(const PlatformProfile& profile) {
  return ObjectWriter()
             .str("name", profile.name())
             .num("a_ms", format_scaled(profile.a(), kMs))
             .num("b_ms_per_px3", format_scaled(profile.b(), kMs))
             .done() +
         "\n";
}

PlatformProfile profile_from_json(std::string_view text) {
  const auto objs = parse_flat(text, false);
  const FlatObject& o = objs.at(0);
  return PlatformProfile(get_string(o, "name"), get_number(o, "a_ms", kMs),
                         get_number(o, "b_ms_per_px3", kMs));
}

std::string sim_result_to_json(const desim::SimResult& r) {
  return ObjectWriter()
             .uint("frames_completed", r.frames_completed)
             .num("mean_ms", format_scaled(r.mean_latency, kMs))
             .num("p50_ms", format_scaled(r.p50, kMs))
             .num("p95_ms", format_scaled(r.p95, kMs))
             .num("max_ms", format_scaled(r.max_latency, kMs))
             .num("transmit_ms", format_scaled(r.mean_transmit, kMs))
             .num("queue_wait_ms", format_scaled(r.mean_queue_wait, kMs))
             .num("service_ms", format_scaled(r.mean_service, kMs))
             .num("throughput_fps", format_scaled(r.per_user_throughput, 0))
             .done() +
         "\n";
}

desim::SimResult sim_result_from_json(std::string_view text) {
  const auto objs = parse_flat(text, false);
  const FlatObject& o = objs.at(0);
  desim::SimResult r;
  r.frames_completed = get_uint(o, "frames_completed");
  r.mean_latency = get_number(o, "mean_ms", kMs);
  r.p50 = get_number(o, "p50_ms", kMs);
  r.p95 = get_number(o, "p95_ms", kMs);
  r.max_latency = get_number(o, "max_ms", kMs);
  r.mean_transmit = get_number(o, "transmit_ms", kMs);
  r.mean_queue_wait = get_number(o, "queue_wait_ms", kMs);
  r.mean_service = get_number(o, "service_ms", kMs);
  r.per_user_throughput = get_number(o, "throughput_fps", 0);
  r.warning = r.frames_completed == 0;
  return r;
}

void write_sweep_csv(std::ostream& out, std::span<const sweep::AchievabilityCell> cells) {
  out << kSweepCsvHeader << '\n';
  for (const auto& c : cells) {
    const auto f = cell_fields(c);
    for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << f[i];
    out << '\n';
  }
}

std::vector<sweep::AchievabilityCell> parse_sweep_csv(std::istream& in) {
  std::vector<sweep::AchievabilityCell> cells;
  detail::CsvReader reader(in, kSweepCsvHeader);
  const std::size_t columns = sweep_columns().size();
  while (auto row = reader.next()) {
    const auto& [line, fields] = *row;
    if (fields.size() != columns) {
      throw ParseError(line, "expected " + std::to_string(columns) + " columns, found " +
                                 std::to_string(fields.size()));
    }
    try {
      cells.push_back(cell_from(fields));
    } catch (const std::exception& ex) {
      throw ParseError(line, ex.what());
    }
  }
  return cells;
}

std::string sweep_to_json(std::span<const sweep::AchievabilityCell> cells) {
  const auto names = sweep_columns();
  std::vector<std::string> objects;
  objects.reserve(cells.size());
  for (const auto& c : cells) {
    const auto f = cell_fields(c);
    ObjectWriter w;
    for (std::size_t i = 0; i < names.size(); ++i) {
      const bool textual = names[i] == "architecture" || names[i] == "platform" ||
                           names[i] == "best_requirement";
      if (textual) {
        w.str(names[i], f[i]);
      } else {
        w.num(names[i], f[i]);
      }
    }
    objects.push_back(w.done("  "));
  }
  return array_of(objects);
}

std::vector<sweep::AchievabilityCell> sweep_from_json(std::string_view text) {
  const auto names = sweep_columns();
  std::vector<sweep::AchievabilityCell> cells;
  for (const auto& o : parse_flat(text, true)) {
    std::vector<std::string> f;
    for (const auto& name : names) {
      auto it = o.find(name);
      if (it == o.end()) throw std::runtime_error("missing field '" + name + "'");
      f.push_back(it->second.text);
    }
    cells.push_back(cell_from(f));
  }
  return cells;
}

std::string validation_to_json(std::span<const ValidationEntry> entries) {
  std::vector<std::string> objects;
  for (const auto& e : entries) {
    const auto& c = e.comparison;
    objects.push_back(ObjectWriter()
                          .str("platform", e.platform)
                          .num("goodput_mbps", format_scaled(e.goodput, kMbps))
                          .str("architecture", to_string(e.architecture))
                          .str("mode", desim::to_string(c.mode))
                          .uint("users_per_ap", c.users_per_ap)
                          .uint("total_users", c.total_users)
                          .num("analytical_ms", format_scaled(c.analytical, kMs))
                          .num("simulated_ms", format_scaled(c.simulated_mean, kMs))
                          .num("abs_gap_ms", format_scaled(c.abs_gap, kMs))
                          .num("rel_gap", format_scaled(c.rel_gap, 0))
                          .num("max_frame_rel_gap", format_scaled(c.max_frame_rel_gap, 0))
                          .uint("bound_violations", c.bound_violations)
                          .uint("frames", c.frames)
                          .boolean("pass", c.pass)
                          .done("  "));
  }
  return array_of(objects);
}

std::vector<ValidationEntry> validation_from_json(std::string_view text) {
  std::vector<ValidationEntry> out;
  for (const auto& o : parse_flat(text, true)) {
    ValidationEntry e;
    e.platform = get_string(o, "platform");
    e.goodput = get_number(o, "goodput_mbps", kMbps);
    e.architecture = architecture_from(get_string(o, "architecture"));
    auto& c = e.comparison;
    const auto mode = desim::parse_mode(get_string(o, "mode"));
    if (!mode) throw std::runtime_error("unknown mode");
    c.mode = *mode;
    c.users_per_ap = get_uint(o, "users_per_ap");
    c.total_users = get_uint(o, "total_users");
    c.analytical = get_number(o, "analytical_ms", kMs);
    c.simulated_mean = get_number(o, "simulated_ms", kMs);
    c.abs_gap = get_number(o, "abs_gap_ms", kMs);
    c.rel_gap = get_number(o, "rel_gap", 0);
    c.max_frame_rel_gap = get_number(o, "max_frame_rel_gap", 0);
    c.bound_violations = get_uint(o, "bound_violations");
    c.frames = get_uint(o, "frames");
    c.pass = get_bool(o, "pass");
    out.push_back(std::move(e));
  }
  return out;
}

std::string spot_checks_to_json(std::span<const sweep::SpotCheck> checks) {
  std::vector<std::string> objects;
  for (const auto& s : checks) {
    objects.push_back(ObjectWriter()
                          .uint("users", s.cell.users)
                          .uint("aps", s.cell.aps)
                          .str("architecture", to_string(s.cell.architecture))
                          .str("platform", s.cell.platform)
                          .num("goodput_mbps", format_scaled(s.cell.goodput, kMbps))
                          .str("best_requirement", s.cell.best.value_or("none"))
                          .str("mode", desim::to_string(s.mode))
                          .num("analytical_ms", format_scaled(s.analytical, kMs))
                          .num("simulated_ms", format_scaled(s.simulated_mean, kMs))
                          .num("budget_ms", format_scaled(s.budget, kMs))
                          .boolean("consistent", s.consistent)
                          .done("  "));
  }
  return array_of(objects);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open '" + path.string() + "': " + std::strerror(errno));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot write '" + path.string() + "': " + std::strerror(errno));
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw std::runtime_error("write to '" + path.string() + "' failed: " + std::strerror(errno));
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw std::runtime_error("cannot replace '" + path.string() + "': " + ec.message());
  }
}

}  // namespace edgecap::io
