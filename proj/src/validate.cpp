#include "svc/validate.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "svc/selector.hpp"
#include "svc/url.hpp"

namespace svc {

namespace {

class Checker {
 public:
  void error(std::string path, std::string message) {
    report.problems.push_back({Severity::error, std::move(path), std::move(message)});
  }
  void warning(std::string path, std::string message) {
    report.problems.push_back({Severity::warning, std::move(path), std::move(message)});
  }

  void selector(const Selector& sel, const std::string& path, bool unique_required) {
    if (sel.expression.empty()) {
      error(path + ".expression", "selector expression is empty");
      return;
    }
    if (auto err = selector_error(sel); !err.empty()) error(path + ".expression", err);
    if (unique_required && sel.expect_many)
      error(path + ".expect_many", "this control requires a unique node (expect_many=false)");
  }

  void url_template(const std::string& text, const std::string& path) {
    for (const auto& name : template_placeholders(text)) {
      if (name != "query" && name != "page")
        error(path, "unknown placeholder {" + name + "}; only {query} and {page} are allowed");
    }
  }

  void modifier(const RequestModifier& mod, const std::string& path) {
    if (const auto* o = std::get_if<UrlOverride>(&mod)) {
      if (o->url_template.empty()) error(path + ".url_override", "url template is empty");
      url_template(o->url_template, path + ".url_override");
    } else if (const auto* p = std::get_if<ParamSet>(&mod)) {
      if (p->params.empty()) error(path + ".param_set", "parameter list is empty");
      for (std::size_t i = 0; i < p->params.size(); ++i) {
        if (p->params[i].first.empty())
          error(path + ".param_set[" + std::to_string(i) + "]", "parameter name is empty");
        url_template(p->params[i].second, path + ".param_set[" + std::to_string(i) + "]");
      }
    } else if (const auto* s = std::get_if<PathSuffix>(&mod)) {
      if (s->suffix.empty()) error(path + ".path_suffix", "path suffix is empty");
    }
  }

  void property(const PropertySpec& prop, const std::string& path) {
    if (prop.name.empty()) error(path + ".name", "property name is empty");
    selector(prop.selector, path + ".selector", false);
    if (prop.extract.kind == ExtractRule::Kind::attribute && prop.extract.attribute.empty())
      error(path + ".extract.name", "attribute extraction needs an attribute name");
  }

  ValidationReport report;
};

}  // namespace

bool ValidationReport::ok() const {
  return std::none_of(problems.begin(), problems.end(),
                      [](const Problem& p) { return p.severity == Severity::error; });
}

std::vector<Problem> ValidationReport::errors() const {
  std::vector<Problem> out;
  std::copy_if(problems.begin(), problems.end(), std::back_inserter(out),
               [](const Problem& p) { return p.severity == Severity::error; });
  return out;
}

std::vector<Problem> ValidationReport::warnings() const {
  std::vector<Problem> out;
  std::copy_if(problems.begin(), problems.end(), std::back_inserter(out),
               [](const Problem& p) { return p.severity == Severity::warning; });
  return out;
}

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& p : problems) {
    if (!out.empty()) out += "; ";
    out += (p.severity == Severity::error ? "error " : "warning ") + p.path + ": " + p.message;
  }
  return out;
}

std::vector<std::string> template_placeholders(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while ((pos = text.find('{', pos)) != std::string_view::npos) {
    auto close = text.find('}', pos);
    if (close == std::string_view::npos) break;
    std::string name(text.substr(pos + 1, close - pos - 1));
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(std::move(name));
    pos = close + 1;
  }
  return out;
}

bool is_timestamp(std::string_view t) {
  auto digits = [&](std::size_t at, std::size_t n) {
    if (at + n > t.size()) return false;
    for (std::size_t i = at; i < at + n; ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  if (!(digits(0, 4) && t.size() > 4 && t[4] == '-' && digits(5, 2) && t.size() > 7 && t[7] == '-' &&
        digits(8, 2) && t.size() > 10 && (t[10] == 'T' || t[10] == 't') && digits(11, 2) &&
        t.size() > 13 && t[13] == ':' && digits(14, 2) && t.size() > 16 && t[16] == ':' &&
        digits(17, 2)))
    return false;
  std::size_t i = 19;
  if (i < t.size() && t[i] == '.') {
    ++i;
    std::size_t start = i;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
    if (i == start) return false;
  }
  if (i < t.size() && (t[i] == 'Z' || t[i] == 'z')) return i + 1 == t.size();
  if (i < t.size() && (t[i] == '+' || t[i] == '-'))
    return digits(i + 1, 2) && i + 3 < t.size() && t[i + 3] == ':' && digits(i + 4, 2) && i + 6 == t.size();
  return false;
}

ValidationReport validate_spec(const ServiceSpec& spec) noexcept {
  Checker c;
  try {
    if (spec.id.empty()) c.error("id", "id is empty");
    if (spec.name.empty()) c.error("name", "name is empty");

    if (spec.metadata.format_version != kFormatVersion)
      c.error("metadata.format_version",
              "unsupported format version '" + spec.metadata.format_version + "'");
    if (spec.metadata.created.empty()) {
      c.warning("metadata.created", "creation timestamp is empty");
    } else if (!is_timestamp(spec.metadata.created)) {
      c.error("metadata.created", "not an RFC 3339 timestamp: " + spec.metadata.created);
    }

    const auto& b = spec.binding;
    if (!url::is_absolute_http(b.search_page_url))
      c.error("binding.search_page_url", "must be an absolute http(s) URL");
    c.selector(b.input, "binding.input", true);
    if (b.trigger) {
      c.selector(*b.trigger, "binding.trigger", true);
    } else {
      c.warning("binding.trigger", "no trigger; only keystroke-driven or form-submit execution applies");
    }
    if (b.next_page) {
      c.selector(*b.next_page, "binding.next_page", true);
    } else {
      c.warning("binding.next_page", "no pagination control; only the first page is reachable "
                                     "unless the request template has {page}");
    }
    if (b.prev_page) c.selector(*b.prev_page, "binding.prev_page", true);
    if (b.reveal) c.selector(*b.reveal, "binding.reveal", true);

    const auto& rs = spec.result_spec;
    if (rs.type_name.empty()) c.error("result_spec.type_name", "result type name is empty");
    c.selector(rs.container, "result_spec.container", false);
    if (!rs.container.expect_many)
      c.error("result_spec.container.expect_many", "result container must have expect_many=true");
    if (!rs.target_url) {
      c.error("result_spec.target_url", "target_url is mandatory");
    } else {
      c.property(*rs.target_url, "result_spec.target_url");
      if (rs.target_url->extract.kind != ExtractRule::Kind::attribute)
        c.error("result_spec.target_url.extract", "target_url must extract an attribute");
      if (rs.target_url->location != PropertyLocation::in_result)
        c.error("result_spec.target_url.location", "target_url is read from the result page");
    }
    if (rs.properties.empty()) c.error("result_spec.properties", "at least one property is required");
    std::set<std::string> names;
    for (std::size_t i = 0; i < rs.properties.size(); ++i) {
      const auto& p = rs.properties[i];
      std::string path = "result_spec.properties[" + std::to_string(i) + "]";
      c.property(p, path);
      if (!p.name.empty() && !names.insert(p.name).second)
        c.error(path + ".name", "duplicate property name '" + p.name + "'");
      if (p.location == PropertyLocation::in_target && !rs.target_url)
        c.error(path + ".location", "in_target property '" + p.name + "' requires target_url");
    }

    std::set<std::string> condition_names;
    for (std::size_t g = 0; g < spec.filters.groups.size(); ++g) {
      const auto& group = spec.filters.groups[g];
      std::string gpath = "filters.groups[" + std::to_string(g) + "]";
      if (group.group_name.empty()) c.error(gpath + ".group_name", "group name is empty");
      for (std::size_t i = 0; i < group.conditions.size(); ++i) {
        const auto& cond = group.conditions[i];
        std::string cpath = gpath + ".conditions[" + std::to_string(i) + "]";
        if (cond.name.empty()) c.error(cpath + ".name", "condition name is empty");
        if (!cond.name.empty() && !condition_names.insert(cond.name).second)
          c.error(cpath + ".name", "duplicate condition name '" + cond.name + "'");
        c.modifier(cond.activation, cpath + ".activation");
      }
    }

    std::set<std::string> ordering_names;
    for (std::size_t i = 0; i < spec.orderings.size(); ++i) {
      const auto& o = spec.orderings[i];
      std::string opath = "orderings[" + std::to_string(i) + "]";
      if (o.name.empty()) c.error(opath + ".name", "ordering name is empty");
      if (!o.name.empty() && !ordering_names.insert(o.name).second)
        c.error(opath + ".name", "duplicate ordering name '" + o.name + "'");
      if (const auto* local = std::get_if<LocalOrdering>(&o.mode)) {
        if (!rs.find_property(local->property))
          c.error(opath + ".mode.local.property",
                  "ordering '" + o.name + "' references unknown property '" + local->property + "'");
      } else {
        c.modifier(std::get<RemoteOrdering>(o.mode).modifier, opath + ".mode.remote");
      }
    }

    if (!spec.strategy) {
      c.warning("strategy", "no execution strategy configured; run strategy detection");
    } else {
      const auto& st = *spec.strategy;
      if (st.variant == StrategyVariant::api_based) {
        if (st.provider_id.empty()) c.error("strategy.provider_id", "api_based strategy needs a provider id");
      } else if (!st.request_template) {
        if (st.variant != StrategyVariant::write_and_click_to_reload)
          c.error("strategy.request_template", "ajax strategies need a request template");
      }
      if (st.request_template) {
        const auto& t = *st.request_template;
        c.url_template(t.url_template, "strategy.request_template.url_template");
        for (std::size_t i = 0; i < t.static_params.size(); ++i)
          c.url_template(t.static_params[i].second,
                         "strategy.request_template.static_params[" + std::to_string(i) + "]");
        if (!t.has_query_placeholder())
          c.error("strategy.request_template.url_template", "template never uses {query}");
        std::string sample = t.url_template;
        for (auto key : {std::string("{query}"), std::string("{page}")}) {
          for (auto pos = sample.find(key); pos != std::string::npos; pos = sample.find(key))
            sample.replace(pos, key.size(), "1");
        }
        if (url::is_absolute_http(b.search_page_url) &&
            !url::is_absolute_http(url::resolve(b.search_page_url, sample)))
          c.error("strategy.request_template.url_template", "template does not resolve to an http(s) URL");
      }
    }
  } catch (...) {
    c.error("", "internal validation failure");
  }
  return std::move(c.report);
}

ValidationReport validate_query(const ServiceSpec& spec, const SearchQuery& query) noexcept {
  Checker c;
  try {
    if (query.page < 1) c.error("page", "page must be >= 1");
    std::vector<std::string> exclusive_seen;
    std::set<std::string> seen;
    for (const auto& name : query.active_filters) {
      if (!seen.insert(name).second) continue;
      const ConditionGroup* group = spec.filters.group_of(name);
      if (!group) {
        c.error("filters", "unknown filter '" + name + "'");
        continue;
      }
      if (group->exclusive) {
        if (std::find(exclusive_seen.begin(), exclusive_seen.end(), group->group_name) !=
            exclusive_seen.end()) {
          c.error("filters", "group '" + group->group_name + "' allows only one active condition");
        }
        exclusive_seen.push_back(group->group_name);
      }
    }
    if (query.active_ordering && !spec.find_ordering(*query.active_ordering))
      c.error("ordering", "unknown ordering '" + *query.active_ordering + "'");
  } catch (...) {
    c.error("", "internal validation failure");
  }
  return std::move(c.report);
}

}  // namespace svc
