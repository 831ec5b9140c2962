#include <json.hpp>

#include "pch/parser.hpp"

namespace pch {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(ErrorCode code, const std::string& msg) { throw PchError(code, msg); }

int as_value(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(ErrorCode::Syntax, where + ": expected an integer value");
  return j.get<int>();
}

}  // namespace

Scm parse_model(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw PchError(ErrorCode::Syntax, std::string("model file is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) fail(ErrorCode::Syntax, "model file must be a JSON object");

  Scm scm;
  if (!root.contains("domain") || !root["domain"].is_number_integer())
    fail(ErrorCode::Syntax, "missing integer field 'domain'");
  scm.sig.domain_size = root["domain"].get<int>();

  if (!root.contains("endogenous") || !root["endogenous"].is_array())
    fail(ErrorCode::Syntax, "missing array field 'endogenous'");
  for (const auto& v : root["endogenous"]) scm.sig.endogenous.push_back(v.get<std::string>());

  if (!root.contains("exogenous") || !root["exogenous"].is_object())
    fail(ErrorCode::Syntax, "missing object field 'exogenous'");
  for (auto it = root["exogenous"].begin(); it != root["exogenous"].end(); ++it)
    scm.exo_vars.emplace_back(it.key(), as_value(it.value(), "exogenous." + it.key()));

  if (!root.contains("distribution") || !root["distribution"].is_array())
    fail(ErrorCode::Syntax, "missing array field 'distribution'");
  for (const auto& entry : root["distribution"]) {
    if (!entry.contains("assignment") || !entry.contains("weight"))
      fail(ErrorCode::Syntax, "distribution entries need 'assignment' and 'weight'");
    std::vector<int> u(scm.exo_vars.size(), -1);
    for (auto it = entry["assignment"].begin(); it != entry["assignment"].end(); ++it) {
      int idx = scm.exo_index(it.key());
      if (idx < 0) fail(ErrorCode::UnknownVariable, "assignment names unknown '" + it.key() + "'");
      u[idx] = as_value(it.value(), "assignment." + it.key());
    }
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i] < 0)
        fail(ErrorCode::DomainError,
             "assignment misses exogenous '" + scm.exo_vars[i].first + "'");
    Rat w;
    try {
      w = rat_from_string(entry["weight"].get<std::string>());
    } catch (const std::exception&) {
      fail(ErrorCode::Syntax, "weights must be exact rational strings like \"3/100\"");
    }
    scm.exo_dist.emplace_back(std::move(u), std::move(w));
  }

  if (!root.contains("mechanisms") || !root["mechanisms"].is_object())
    fail(ErrorCode::Syntax, "missing object field 'mechanisms'");
  scm.mechanisms.resize(scm.sig.endogenous.size());
  for (std::size_t i = 0; i < scm.sig.endogenous.size(); ++i) {
    const std::string& name = scm.sig.endogenous[i];
    if (!root["mechanisms"].contains(name))
      fail(ErrorCode::IncompleteTable, "no mechanism for endogenous '" + name + "'");
    const Json& jm = root["mechanisms"][name];
    Mechanism m;
    for (const auto& p : jm.value("endo_parents", Json::array()))
      m.endo_parents.push_back(p.get<std::string>());
    for (const auto& p : jm.value("exo_parents", Json::array()))
      m.exo_parents.push_back(p.get<std::string>());

    std::vector<int> exo_sizes;
    for (const auto& p : m.exo_parents) {
      int j = scm.exo_index(p);
      if (j < 0) fail(ErrorCode::UnknownVariable, "unknown exogenous parent '" + p + "'");
      exo_sizes.push_back(scm.exo_vars[j].second);
    }
    for (const auto& p : m.endo_parents)
      if (scm.sig.var_index(p) < 0)
        fail(ErrorCode::UnknownVariable, "unknown endogenous parent '" + p + "'");

    std::size_t total = m.table_size(scm.sig.domain_size, exo_sizes);
    m.table.assign(total, -1);
    if (!jm.contains("table") || !jm["table"].is_array())
      fail(ErrorCode::IncompleteTable, "mechanism of '" + name + "' has no table");
    for (const auto& row : jm["table"]) {
      if (!row.contains("inputs") || !row.contains("output"))
        fail(ErrorCode::Syntax, "table rows need 'inputs' and 'output'");
      std::size_t idx = 0;
      for (const auto& p : m.endo_parents) {
        if (!row["inputs"].contains(p))
          fail(ErrorCode::IncompleteTable, "table row misses input '" + p + "'");
        int v = as_value(row["inputs"][p], "inputs." + p);
        if (v < 0 || v >= scm.sig.domain_size)
          fail(ErrorCode::DomainError, "table input outside Val for '" + p + "'");
        idx = idx * scm.sig.domain_size + v;
      }
      for (std::size_t k = 0; k < m.exo_parents.size(); ++k) {
        const auto& p = m.exo_parents[k];
        if (!row["inputs"].contains(p))
          fail(ErrorCode::IncompleteTable, "table row misses input '" + p + "'");
        int v = as_value(row["inputs"][p], "inputs." + p);
        if (v < 0 || v >= exo_sizes[k])
          fail(ErrorCode::DomainError, "table input out of range for '" + p + "'");
        idx = idx * exo_sizes[k] + v;
      }
      if (m.table[idx] != -1)
        fail(ErrorCode::DuplicateAssignment, "duplicate table row in mechanism of '" + name + "'");
      m.table[idx] = as_value(row["output"], "output");
    }
    for (std::size_t k = 0; k < m.table.size(); ++k)
      if (m.table[k] == -1)
        fail(ErrorCode::IncompleteTable, "mechanism table of '" + name + "' is not total");
    scm.mechanisms[i] = std::move(m);
  }

  scm.check();
  return scm;
}

Scm parse_model_file(const std::string& path) { return parse_model(read_text_file(path)); }

std::string print_model(const Scm& scm) {
  Json root;
  root["domain"] = scm.sig.domain_size;
  root["endogenous"] = scm.sig.endogenous;
  Json exo = Json::object();
  for (const auto& [name, size] : scm.exo_vars) exo[name] = size;
  root["exogenous"] = std::move(exo);

  Json dist = Json::array();
  for (const auto& [u, w] : scm.exo_dist) {
    Json entry;
    Json assign = Json::object();
    for (std::size_t i = 0; i < u.size(); ++i) assign[scm.exo_vars[i].first] = u[i];
    entry["assignment"] = std::move(assign);
    entry["weight"] = rat_to_string(w);
    dist.push_back(std::move(entry));
  }
  root["distribution"] = std::move(dist);

  Json mechs = Json::object();
  for (std::size_t i = 0; i < scm.sig.endogenous.size(); ++i) {
    const Mechanism& m = scm.mechanisms[i];
    Json jm;
    jm["endo_parents"] = m.endo_parents;
    jm["exo_parents"] = m.exo_parents;
    Json table = Json::array();

    std::vector<int> sizes;
    for (std::size_t k = 0; k < m.endo_parents.size(); ++k) sizes.push_back(scm.sig.domain_size);
    for (const auto& p : m.exo_parents) sizes.push_back(scm.exo_vars[scm.exo_index(p)].second);

    std::vector<int> idx(sizes.size(), 0);
    std::size_t flat = 0;
    while (true) {
      Json row;
      Json inputs = Json::object();
      for (std::size_t k = 0; k < m.endo_parents.size(); ++k) inputs[m.endo_parents[k]] = idx[k];
      for (std::size_t k = 0; k < m.exo_parents.size(); ++k)
        inputs[m.exo_parents[k]] = idx[m.endo_parents.size() + k];
      row["inputs"] = std::move(inputs);
      row["output"] = m.table[flat];
      table.push_back(std::move(row));
      ++flat;
      int pos = static_cast<int>(sizes.size()) - 1;
      while (pos >= 0 && ++idx[pos] == sizes[pos]) idx[pos--] = 0;
      if (pos < 0) break;
    }
    jm["table"] = std::move(table);
    mechs[scm.sig.endogenous[i]] = std::move(jm);
  }
  root["mechanisms"] = std::move(mechs);
  return root.dump(2) + "\n";
}

void write_model_file(const Scm& scm, const std::string& path) {
  write_text_file(path, print_model(scm));
}

}  // namespace pch
