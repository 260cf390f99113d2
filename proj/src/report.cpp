#include "dpdp/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <system_error>

#include "dpdp/errors.hpp"

namespace dpdp {

using nlohmann::ordered_json;

namespace {

std::string chars(double x, std::chars_format fmt) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, fmt);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

std::string svg_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* flag(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string format_java_double(double x) {
  if (std::isnan(x)) return "NaN";
  if (std::isinf(x)) return x > 0 ? "Infinity" : "-Infinity";
  if (x == 0.0) return std::signbit(x) ? "-0.0" : "0.0";
  const double mag = std::fabs(x);
  if (mag >= 1e-3 && mag < 1e7) {
    std::string s = chars(x, std::chars_format::fixed);
    if (s.find('.') == std::string::npos) s += ".0";
    return s;
  }
  // "d.ddde-04" -> "d.dddE-4"
  const std::string s = chars(x, std::chars_format::scientific);
  const auto e = s.find('e');
  std::string mantissa = s.substr(0, e);
  if (mantissa.find('.') == std::string::npos) mantissa += ".0";
  const int exponent = std::stoi(s.substr(e + 1));
  return mantissa + "E" + std::to_string(exponent);
}

std::string format_number(double x) {
  if (!std::isfinite(x)) throw std::domain_error("non-finite value in numeric output");
  return chars(x, std::chars_format::general);
}

std::string format_action(const Action& a) {
  struct Visitor {
    std::string operator()(const Move& m) const { return "Move " + m.target.id; }
    std::string operator()(const Take& t) const {
      return "Take " + t.depot.value + "," + t.article.value + "," + std::to_string(t.quantity);
    }
    std::string operator()(const Delivery& d) const {
      return "Delivery " + d.client.value + "," + d.article.value + "," + std::to_string(d.quantity);
    }
    std::string operator()(const ChargeBattery& c) const { return "ChargeBattery " + c.charger.value; }
  };
  return "(" + std::visit(Visitor{}, a.kind) + "," + flag(a.executed) + ")";
}

std::string format_plan_listing(std::string_view label, std::span<const Action> actions) {
  std::string out(label);
  out += '=';
  for (const auto& a : actions) out += format_action(a);
  return out;
}

std::string format_fitness_line(const FitnessBreakdown& f) {
  std::string out;
  for (std::size_t i = 0; i < f.constraints.size(); ++i)
    out += "F_C" + std::to_string(i + 1) + " =" + format_java_double(f.constraints[i].fitness) + " ";
  out += "F_A =" + format_java_double(f.aggregate);
  return out;
}

std::string trace_csv(std::span<const TraceRecord> trace) {
  std::string out = "tick,agent_id,x,y,battery,action_kind,request_id,event_flag\n";
  for (const auto& rec : trace) {
    const char* event_flag = rec.fired_events.empty() ? "0" : "1";
    for (const auto& s : rec.agents) {
      out += std::to_string(rec.tick);
      out += ',' + s.agent.value;
      out += ',' + format_number(s.position.x);
      out += ',' + format_number(s.position.y);
      out += ',' + format_number(s.battery);
      out += ',' + s.action;
      out += ',' + (s.request ? to_string(*s.request) : std::string());
      out += ',';
      out += event_flag;
      out += '\n';
    }
  }
  return out;
}

ordered_json breakdown_json(const FitnessBreakdown& f) {
  ordered_json j;
  j["mode"] = std::holds_alternative<Legacy>(f.mode) ? "legacy" : "weighted";
  j["distance_sum"] = f.distance_sum;
  j["obstacle_sum"] = f.obstacle_sum;
  j["constraints"] = ordered_json::array();
  for (const auto& c : f.constraints)
    j["constraints"].push_back({{"kind", std::string(to_string(c.kind))},
                                {"coefficient", c.coefficient},
                                {"raw_sum", c.raw_sum},
                                {"fitness", c.fitness}});
  j["aggregate"] = f.aggregate;
  return j;
}

namespace {

ordered_json stops_json(std::span<const Stop> stops) {
  ordered_json j = ordered_json::array();
  for (const auto& s : stops) j.push_back(to_string(s));
  return j;
}

}  // namespace

ordered_json results_json(const RunResult& result, std::string_view scenario_name, std::uint64_t seed) {
  ordered_json j;
  j["scenario"] = std::string(scenario_name);
  j["seed"] = seed;
  j["status"] = std::string(to_string(result.status));
  j["message"] = result.message;
  j["ticks"] = result.metrics.ticks;

  ordered_json agents = ordered_json::object();
  for (const auto& [id, m] : result.metrics.agents) {
    ordered_json a;
    a["total_distance"] = m.total_distance;
    a["completion_tick"] = m.completion_tick ? ordered_json(*m.completion_tick) : ordered_json(nullptr);
    a["replan_count"] = m.replan_count;
    a["plans"] = ordered_json::array();
    for (const auto& p : m.plans) {
      ordered_json pj;
      pj["index"] = p.index;
      pj["tick"] = p.tick;
      pj["reason"] = std::string(to_string(p.reason));
      pj["retained"] = stops_json(p.retained);
      pj["added"] = stops_json(p.added);
      pj["best"] = stops_json(p.report.best);
      pj["fitness"] = breakdown_json(p.report.best_fitness);
      pj["generations"] = p.report.generations;
      pj["early_stopped"] = p.report.early_stopped;
      pj["history"] = p.report.history;
      a["plans"].push_back(pj);
    }
    agents[id.value] = a;
  }
  j["agents"] = agents;

  ordered_json requests = ordered_json::array();
  for (const auto& [id, r] : result.final_state.requests)
    requests.push_back({{"id", to_string(id)}, {"agent", r.agent.value}, {"done", r.done}});
  j["requests"] = requests;

  ordered_json stock = ordered_json::object();
  for (const auto& [id, d] : result.final_state.world.depots) {
    ordered_json s = ordered_json::object();
    for (const auto& [article, qty] : d.stock) s[article.value] = qty;
    stock[id.value] = s;
  }
  j["final_stock"] = stock;
  return j;
}

std::string render_svg(const World& world, std::span<const TraceRecord> trace, const SvgStyle& style) {
  const double w = std::max(world.bounds.width(), std::numeric_limits<double>::min());
  const double h = std::max(world.bounds.height(), std::numeric_limits<double>::min());
  const double inner = style.view_size - 2.0 * style.margin;
  const double scale = inner / std::max(w, h);
  const double vw = w * scale + 2.0 * style.margin;
  const double vh = h * scale + 2.0 * style.margin;
  // y grows upward in the world and downward in SVG.
  auto sx = [&](double x) { return style.margin + (x - world.bounds.min.x) * scale; };
  auto sy = [&](double y) { return style.margin + (world.bounds.max.y - y) * scale; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + svg_num(vw) + " " + svg_num(vh) + "\">\n";
  out += "<rect x=\"" + svg_num(sx(world.bounds.min.x)) + "\" y=\"" + svg_num(sy(world.bounds.max.y)) +
         "\" width=\"" + svg_num(w * scale) + "\" height=\"" + svg_num(h * scale) +
         "\" fill=\"white\" stroke=\"black\"/>\n";

  for (const auto& o : world.obstacles)
    out += "<rect class=\"obstacle\" x=\"" + svg_num(sx(o.shape.min.x)) + "\" y=\"" +
           svg_num(sy(o.shape.max.y)) + "\" width=\"" + svg_num(o.shape.width() * scale) +
           "\" height=\"" + svg_num(o.shape.height() * scale) +
           "\" fill=\"gray\" fill-opacity=\"0.4\" stroke=\"dimgray\"/>\n";

  // Polylines first so markers stay visible on top.
  std::map<AgentId, std::vector<Point2D>> paths;
  std::vector<AgentId> order;
  for (const auto& rec : trace)
    for (const auto& s : rec.agents) {
      auto& path = paths[s.agent];
      if (path.empty()) order.push_back(s.agent);
      if (path.empty() || !(path.back() == s.position)) path.push_back(s.position);
    }
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::string& color = style.agent_colors[i % style.agent_colors.size()];
    out += "<polyline class=\"route\" data-agent=\"" + xml_escape(order[i].value) + "\" fill=\"none\" stroke=\"" +
           color + "\" stroke-width=\"2\" points=\"";
    const auto& path = paths[order[i]];
    for (std::size_t k = 0; k < path.size(); ++k) {
      if (k) out += ' ';
      out += svg_num(sx(path[k].x)) + "," + svg_num(sy(path[k].y));
    }
    out += "\"/>\n";
  }

  const double r = 6.0;
  for (const auto& [id, d] : world.depots) {
    out += "<rect class=\"depot\" x=\"" + svg_num(sx(d.position.x) - r) + "\" y=\"" +
           svg_num(sy(d.position.y) - r) + "\" width=\"" + svg_num(2 * r) + "\" height=\"" + svg_num(2 * r) +
           "\" fill=\"black\"/>\n";
    out += "<text x=\"" + svg_num(sx(d.position.x) + r + 2) + "\" y=\"" + svg_num(sy(d.position.y) - r) +
           "\" font-size=\"12\">" + xml_escape(id.value) + "</text>\n";
  }
  for (const auto& [id, c] : world.clients) {
    out += "<circle class=\"client\" cx=\"" + svg_num(sx(c.position.x)) + "\" cy=\"" + svg_num(sy(c.position.y)) +
           "\" r=\"" + svg_num(r) + "\" fill=\"white\" stroke=\"black\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + svg_num(sx(c.position.x) + r + 2) + "\" y=\"" + svg_num(sy(c.position.y) - r) +
           "\" font-size=\"12\">" + xml_escape(id.value) + "</text>\n";
  }
  for (const auto& [id, c] : world.chargers) {
    const double cx = sx(c.position.x), cy = sy(c.position.y);
    out += "<polygon class=\"charger\" points=\"" + svg_num(cx) + "," + svg_num(cy - r) + " " +
           svg_num(cx - r) + "," + svg_num(cy + r) + " " + svg_num(cx + r) + "," + svg_num(cy + r) +
           "\" fill=\"gold\" stroke=\"black\"/>\n";
    out += "<text x=\"" + svg_num(cx + r + 2) + "\" y=\"" + svg_num(cy - r) + "\" font-size=\"12\">" +
           xml_escape(id.value) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot replace " + path.string() + ": " + ec.message());
  }
}

}  // namespace dpdp
