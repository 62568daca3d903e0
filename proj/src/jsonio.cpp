#include "corelab/jsonio.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace corelab {
namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw ParseError(where + ": " + msg);
}

const Json& field(const Json& j, const std::string& where, const char* key) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

int get_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

double get_num(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

std::complex<double> get_complex(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2)
    fail(where, "complex numbers must be two-element [re, im] arrays");
  return {get_num(j[0], where + "[0]"), get_num(j[1], where + "[1]")};
}

ComplexMatrix get_matrix(const Json& j, Eigen::Index rows, Eigen::Index cols,
                         const std::string& where) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
    fail(where, "expected " + std::to_string(rows) + " matrix rows");
  ComplexMatrix out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<size_t>(r)];
    std::string wr = where + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      fail(wr, "expected " + std::to_string(cols) + " entries");
    for (Eigen::Index c = 0; c < cols; ++c)
      out(r, c) = get_complex(row[static_cast<size_t>(c)],
                              wr + "[" + std::to_string(c) + "]");
  }
  return out;
}

void check_keys(const Json& j, const std::string& where,
                const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      fail(where, "unknown field \"" + it.key() + "\"");
}

GraphRep parse_graph_rep(const Json& j, Eigen::Index dim,
                         const std::string& where) {
  const Json& jg = field(j, where, "graph");
  std::string wg = where + ".graph";
  check_keys(jg, wg, {"vertices", "edges"});
  int vertices = get_int(field(jg, wg, "vertices"), wg + ".vertices");
  if (vertices < 1) fail(wg + ".vertices", "need at least one vertex");
  const Json& je = field(jg, wg, "edges");
  if (!je.is_array()) fail(wg + ".edges", "expected an array");
  std::vector<Edge> edges;
  for (size_t i = 0; i < je.size(); ++i) {
    std::string we = wg + ".edges[" + std::to_string(i) + "]";
    check_keys(je[i], we, {"source", "range"});
    int s = get_int(field(je[i], we, "source"), we + ".source");
    int r = get_int(field(je[i], we, "range"), we + ".range");
    if (s < 1 || s > vertices)
      fail(we + ".source", "vertex label out of range 1.." +
                               std::to_string(vertices));
    if (r < 1 || r > vertices)
      fail(we + ".range",
           "vertex label out of range 1.." + std::to_string(vertices));
    edges.push_back(Edge{static_cast<int>(i), s - 1, r - 1});
  }
  GraphRep rep;
  rep.graph = DirectedGraph(vertices, std::move(edges));
  rep.dim = dim;
  const Json& js = field(j, where, "sigma");
  if (!js.is_array() || static_cast<int>(js.size()) != vertices)
    fail(where + ".sigma", "expected one matrix per vertex");
  for (size_t v = 0; v < js.size(); ++v)
    rep.sigma.push_back(get_matrix(js[v], dim, dim,
                                   where + ".sigma[" + std::to_string(v) + "]"));
  const Json& ja = field(j, where, "A");
  if (!ja.is_array() ||
      static_cast<int>(ja.size()) != rep.graph.edge_count())
    fail(where + ".A", "expected one matrix per edge");
  for (size_t e = 0; e < ja.size(); ++e)
    rep.A.push_back(
        get_matrix(ja[e], dim, dim, where + ".A[" + std::to_string(e) + "]"));
  check_graph_rep(rep);
  return rep;
}

KGraphRep parse_kgraph_rep(const Json& j, Eigen::Index dim,
                           const std::string& where) {
  const Json& jt = field(j, where, "theta");
  std::string wt = where + ".theta";
  check_keys(jt, wt, {"k", "m", "relations"});
  int k = get_int(field(jt, wt, "k"), wt + ".k");
  if (k < 1) fail(wt + ".k", "need at least one color");
  const Json& jm = field(jt, wt, "m");
  if (!jm.is_array() || static_cast<int>(jm.size()) != k)
    fail(wt + ".m", "expected " + std::to_string(k) + " edge counts");
  std::vector<int> m;
  for (size_t i = 0; i < jm.size(); ++i) {
    int mi = get_int(jm[i], wt + ".m[" + std::to_string(i) + "]");
    if (mi < 1)
      fail(wt + ".m[" + std::to_string(i) + "]", "edge count must be >= 1");
    m.push_back(mi);
  }

  std::map<std::pair<int, int>, std::vector<int>> theta;
  if (jt.contains("relations") || k >= 2) {
    const Json& jr = field(jt, wt, "relations");
    if (!jr.is_array()) fail(wt + ".relations", "expected an array");
    for (size_t ri = 0; ri < jr.size(); ++ri) {
      std::string wr = wt + ".relations[" + std::to_string(ri) + "]";
      check_keys(jr[ri], wr, {"colors", "pairs"});
      const Json& jc = field(jr[ri], wr, "colors");
      if (!jc.is_array() || jc.size() != 2)
        fail(wr + ".colors", "expected a two-element [i, j] array");
      int i = get_int(jc[0], wr + ".colors[0]");
      int jcol = get_int(jc[1], wr + ".colors[1]");
      if (i < 1 || jcol < 1 || i > k || jcol > k || i >= jcol)
        fail(wr + ".colors",
             "need 1-based colors with i < j <= " + std::to_string(k));
      if (theta.count({i - 1, jcol - 1}))
        fail(wr + ".colors", "duplicate relation for this color pair");
      int mi = m[static_cast<size_t>(i - 1)];
      int mj = m[static_cast<size_t>(jcol - 1)];
      const Json& jp = field(jr[ri], wr, "pairs");
      if (!jp.is_array() || static_cast<int>(jp.size()) != mi * mj)
        fail(wr + ".pairs",
             "expected " + std::to_string(mi * mj) + " pair entries");
      std::vector<int> perm(static_cast<size_t>(mi * mj), -1);
      std::vector<bool> image(static_cast<size_t>(mi * mj), false);
      for (size_t pi = 0; pi < jp.size(); ++pi) {
        std::string wp = wr + ".pairs[" + std::to_string(pi) + "]";
        const Json& e = jp[pi];
        if (!e.is_array() || e.size() != 2 || !e[0].is_array() ||
            e[0].size() != 2 || !e[1].is_array() || e[1].size() != 2)
          fail(wp, "expected [[l, m], [l', m']]");
        int l = get_int(e[0][0], wp + "[0][0]");
        int mm = get_int(e[0][1], wp + "[0][1]");
        int lp = get_int(e[1][0], wp + "[1][0]");
        int mp = get_int(e[1][1], wp + "[1][1]");
        if (l < 1 || l > mi || lp < 1 || lp > mi)
          fail(wp, "color-" + std::to_string(i) + " index out of range 1.." +
                       std::to_string(mi));
        if (mm < 1 || mm > mj || mp < 1 || mp > mj)
          fail(wp, "color-" + std::to_string(jcol) +
                       " index out of range 1.." + std::to_string(mj));
        int src = (l - 1) * mj + (mm - 1);
        int dst = (lp - 1) * mj + (mp - 1);
        if (perm[static_cast<size_t>(src)] != -1)
          fail(wp, "duplicate pair (" + std::to_string(l) + "," +
                       std::to_string(mm) + ")");
        if (image[static_cast<size_t>(dst)])
          fail(wp, "image (" + std::to_string(lp) + "," + std::to_string(mp) +
                       ") repeated; relation must be a bijection");
        perm[static_cast<size_t>(src)] = dst;
        image[static_cast<size_t>(dst)] = true;
      }
      theta[{i - 1, jcol - 1}] = std::move(perm);
    }
    for (int i = 0; i < k; ++i)
      for (int jj = i + 1; jj < k; ++jj)
        if (!theta.count({i, jj}))
          fail(wt + ".relations", "missing relation for colors (" +
                                      std::to_string(i + 1) + "," +
                                      std::to_string(jj + 1) + ")");
  }

  KGraphRep rep;
  rep.kgraph = ThetaKGraph(k, std::move(m), std::move(theta));
  ThetaDiagnostic diag = validate_theta(rep.kgraph);
  if (!diag.ok) fail(wt, "inconsistent relations: " + diag.message);
  rep.dim = dim;
  const Json& jrows = field(j, where, "rows");
  if (!jrows.is_array() || static_cast<int>(jrows.size()) != k)
    fail(where + ".rows", "expected one row of matrices per color");
  for (size_t i = 0; i < jrows.size(); ++i) {
    const Json& row = jrows[i];
    std::string wr = where + ".rows[" + std::to_string(i) + "]";
    int mi = rep.kgraph.m()[i];
    if (!row.is_array() || static_cast<int>(row.size()) != mi)
      fail(wr, "expected " + std::to_string(mi) + " matrices");
    std::vector<ComplexMatrix> mats;
    for (size_t e = 0; e < row.size(); ++e)
      mats.push_back(
          get_matrix(row[e], dim, dim, wr + "[" + std::to_string(e) + "]"));
    rep.rows.push_back(std::move(mats));
  }
  check_kgraph_rep(rep);
  return rep;
}

double drop_negative_zero(double v) { return v == 0.0 ? 0.0 : v; }

Json complex_to_json(const std::complex<double>& z) {
  return Json::array({drop_negative_zero(z.real()), drop_negative_zero(z.imag())});
}

}  // namespace

LoadedRep parse_rep(const Json& j, const std::string& source) {
  if (!j.is_object()) fail(source, "top level must be an object");
  const Json& jk = field(j, source, "kind");
  if (!jk.is_string()) fail(source + ".kind", "expected a string");
  std::string kind = jk.get<std::string>();
  Eigen::Index dim = get_int(field(j, source, "dim"), source + ".dim");
  if (dim < 1) fail(source + ".dim", "dimension must be >= 1");
  if (j.contains("labels") && !j["labels"].is_object())
    fail(source + ".labels", "expected an object");
  LoadedRep out;
  out.path = source;
  if (j.contains("expect")) {
    if (!j["expect"].is_object()) fail(source + ".expect", "expected an object");
    out.expect = j["expect"];
  }
  if (kind == "graph") {
    check_keys(j, source, {"kind", "dim", "graph", "sigma", "A", "labels",
                           "expect"});
    out.kind = RepKind::Graph;
    out.graph_rep = parse_graph_rep(j, dim, source);
  } else if (kind == "single_vertex_kgraph") {
    check_keys(j, source,
               {"kind", "dim", "theta", "rows", "labels", "expect"});
    out.kind = RepKind::SingleVertexKGraph;
    out.kgraph_rep = parse_kgraph_rep(j, dim, source);
  } else {
    fail(source + ".kind",
         "expected \"graph\" or \"single_vertex_kgraph\", got \"" + kind +
             "\"");
  }
  return out;
}

LoadedRep load_rep_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string bytes = buf.str();
  Json j;
  try {
    j = Json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  LoadedRep out = parse_rep(j, path);
  out.digest = fnv1a64_hex(bytes);
  return out;
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json rep_to_json(const GraphRep& rep) {
  Json j = Json::object();
  j["kind"] = "graph";
  j["dim"] = static_cast<int>(rep.dim);
  Json edges = Json::array();
  for (const Edge& e : rep.graph.edges())
    edges.push_back(Json{{"source", e.source + 1}, {"range", e.range + 1}});
  j["graph"] = Json{{"vertices", rep.graph.vertex_count()},
                    {"edges", std::move(edges)}};
  Json sigma = Json::array();
  for (const ComplexMatrix& s : rep.sigma) sigma.push_back(matrix_to_json(s));
  j["sigma"] = std::move(sigma);
  Json a = Json::array();
  for (const ComplexMatrix& x : rep.A) a.push_back(matrix_to_json(x));
  j["A"] = std::move(a);
  return j;
}

Json rep_to_json(const KGraphRep& rep) {
  Json j = Json::object();
  j["kind"] = "single_vertex_kgraph";
  j["dim"] = static_cast<int>(rep.dim);
  int k = rep.kgraph.k();
  Json relations = Json::array();
  for (int i = 0; i < k; ++i)
    for (int jj = i + 1; jj < k; ++jj) {
      int mi = rep.kgraph.m()[static_cast<size_t>(i)];
      int mj = rep.kgraph.m()[static_cast<size_t>(jj)];
      const std::vector<int>& perm = rep.kgraph.theta(i, jj);
      Json pairs = Json::array();
      for (int l = 0; l < mi; ++l)
        for (int mm = 0; mm < mj; ++mm) {
          int img = perm[static_cast<size_t>(l * mj + mm)];
          pairs.push_back(Json::array(
              {Json::array({l + 1, mm + 1}),
               Json::array({img / mj + 1, img % mj + 1})}));
        }
      relations.push_back(
          Json{{"colors", Json::array({i + 1, jj + 1})},
               {"pairs", std::move(pairs)}});
    }
  j["theta"] = Json{{"k", k},
                    {"m", rep.kgraph.m()},
                    {"relations", std::move(relations)}};
  Json rows = Json::array();
  for (const auto& row : rep.rows) {
    Json jr = Json::array();
    for (const ComplexMatrix& x : row) jr.push_back(matrix_to_json(x));
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  return j;
}

void save_rep_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << j.dump(2) << "\n";
  if (!out) throw ParseError(path + ": write failed");
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace corelab
