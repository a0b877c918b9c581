#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "precut/chem.hpp"

namespace precut::chem {
namespace {

constexpr double kMinSeparation = 0.25;

// Fruchterman-Reingold relaxation with unit ideal length on one component.
void relax(const MolecularGraph& g, std::span<const int> atoms, std::vector<Point2>& pos) {
  const int n = static_cast<int>(atoms.size());
  if (n < 2) return;
  std::vector<int> local(g.atom_count(), -1);
  for (int i = 0; i < n; ++i) local[atoms[i]] = i;
  std::vector<Point2> disp(n);
  constexpr int kIterations = 300;
  for (int it = 0; it < kIterations; ++it) {
    const double temperature = 0.5 * (1.0 - static_cast<double>(it) / kIterations) + 0.01;
    std::fill(disp.begin(), disp.end(), Point2{});
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        double dx = pos[atoms[i]].x - pos[atoms[j]].x;
        double dy = pos[atoms[i]].y - pos[atoms[j]].y;
        double d2 = dx * dx + dy * dy;
        if (d2 < 1e-12) {
          // Coincident: separate along a fixed index-dependent direction.
          const double angle = 0.7 * (i + 3 * j);
          dx = std::cos(angle) * 1e-3;
          dy = std::sin(angle) * 1e-3;
          d2 = dx * dx + dy * dy;
        }
        const double f = 1.0 / d2;  // k^2/d divided by d for the unit vector
        disp[i].x += dx * f;
        disp[i].y += dy * f;
        disp[j].x -= dx * f;
        disp[j].y -= dy * f;
      }
    }
    for (const auto& b : g.bonds()) {
      const int i = local[b.a];
      const int j = local[b.b];
      if (i < 0 || j < 0) continue;
      const double dx = pos[b.a].x - pos[b.b].x;
      const double dy = pos[b.a].y - pos[b.b].y;
      const double d = std::sqrt(dx * dx + dy * dy);
      // d^2/k along the unit vector.
      disp[i].x -= dx * d;
      disp[i].y -= dy * d;
      disp[j].x += dx * d;
      disp[j].y += dy * d;
    }
    for (int i = 0; i < n; ++i) {
      const double len = std::hypot(disp[i].x, disp[i].y);
      if (len <= 0.0) continue;
      const double step = std::min(len, temperature);
      pos[atoms[i]].x += disp[i].x / len * step;
      pos[atoms[i]].y += disp[i].y / len * step;
    }
  }
}

bool separated(std::span<const int> atoms, const std::vector<Point2>& pos) {
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      if (std::hypot(pos[atoms[i]].x - pos[atoms[j]].x, pos[atoms[i]].y - pos[atoms[j]].y) < kMinSeparation) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

std::vector<Point2> schematic_coords(const MolecularGraph& g) {
  const int n = g.atom_count();
  std::vector<Point2> pos(n);
  if (n == 0) return pos;
  const auto comp = g.component_ids();
  const int ncomp = g.component_count();
  std::vector<std::vector<int>> members(ncomp);
  for (int i = 0; i < n; ++i) members[comp[i]].push_back(i);

  double cursor = 0.0;
  for (int c = 0; c < ncomp; ++c) {
    const auto& atoms = members[c];
    // Breadth-first seed: each atom's children fan out from its position.
    std::vector<bool> placed(n, false);
    std::vector<double> heading(n, 0.0);
    std::vector<int> queue{atoms.front()};
    placed[atoms.front()] = true;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const int u = queue[qi];
      int k = 0;
      const int fan = std::max(1, g.degree(u));
      for (const auto& nb : g.neighbors(u)) {
        if (placed[nb.atom]) continue;
        const double angle = heading[u] + (qi == 0 ? 2.0 * std::numbers::pi * k / fan
                                                   : (k - 0.5 * (fan - 2)) * (std::numbers::pi / 3.0));
        pos[nb.atom] = {pos[u].x + std::cos(angle), pos[u].y + std::sin(angle)};
        heading[nb.atom] = angle;
        placed[nb.atom] = true;
        queue.push_back(nb.atom);
        ++k;
      }
    }
    relax(g, atoms, pos);

    double total = 0.0;
    int bonds = 0;
    for (const auto& b : g.bonds()) {
      if (comp[b.a] != c) continue;
      total += std::hypot(pos[b.a].x - pos[b.b].x, pos[b.a].y - pos[b.b].y);
      ++bonds;
    }
    if (bonds > 0 && total > 0.0) {
      const double scale = bonds / total;
      for (int a : atoms) {
        pos[a].x *= scale;
        pos[a].y *= scale;
      }
    }
    if (!separated(atoms, pos)) {
      // Last resort: a circle with unit spacing is always separated.
      const double radius = atoms.size() / (2.0 * std::numbers::pi) + 0.5;
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        const double angle = 2.0 * std::numbers::pi * i / atoms.size();
        pos[atoms[i]] = {radius * std::cos(angle), radius * std::sin(angle)};
      }
    }

    double cx = 0.0, cy = 0.0;
    for (int a : atoms) {
      cx += pos[a].x;
      cy += pos[a].y;
    }
    cx /= atoms.size();
    cy /= atoms.size();
    double min_x = 0.0, max_x = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const double x = pos[atoms[i]].x - cx;
      min_x = i ? std::min(min_x, x) : x;
      max_x = i ? std::max(max_x, x) : x;
    }
    const double shift = c == 0 ? 0.0 : cursor - min_x;
    for (int a : atoms) {
      pos[a].x = pos[a].x - cx + shift;
      pos[a].y -= cy;
    }
    cursor = shift + max_x + 1.5;
  }
  return pos;
}

std::string depict_svg(const MolecularGraph& g, int size_px) {
  const auto pos = schematic_coords(g);
  double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    min_x = i ? std::min(min_x, pos[i].x) : pos[i].x;
    max_x = i ? std::max(max_x, pos[i].x) : pos[i].x;
    min_y = i ? std::min(min_y, pos[i].y) : pos[i].y;
    max_y = i ? std::max(max_y, pos[i].y) : pos[i].y;
  }
  const double span = std::max({max_x - min_x, max_y - min_y, 1.0});
  const double margin = 0.1 * size_px;
  const double scale = (size_px - 2 * margin) / span;
  auto px = [&](const Point2& p) {
    return Point2{margin + (p.x - min_x) * scale + 0.5 * (size_px - 2 * margin - (max_x - min_x) * scale),
                  margin + (max_y - p.y) * scale + 0.5 * (size_px - 2 * margin - (max_y - min_y) * scale)};
  };

  std::ostringstream svg;
  svg.precision(2);
  svg << std::fixed;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_px << "\" height=\"" << size_px
      << "\" viewBox=\"0 0 " << size_px << ' ' << size_px << "\">";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>";
  for (const auto& b : g.bonds()) {
    const Point2 p = px(pos[b.a]);
    const Point2 q = px(pos[b.b]);
    const double len = std::max(1e-9, std::hypot(q.x - p.x, q.y - p.y));
    const double ox = -(q.y - p.y) / len * 3.0;
    const double oy = (q.x - p.x) / len * 3.0;
    auto line = [&](double sx, double sy, const char* extra) {
      svg << "<line x1=\"" << p.x + sx << "\" y1=\"" << p.y + sy << "\" x2=\"" << q.x + sx << "\" y2=\"" << q.y + sy
          << "\" stroke=\"black\" stroke-width=\"1.5\"" << extra << "/>";
    };
    switch (b.order) {
      case BondOrder::Single: line(0, 0, ""); break;
      case BondOrder::Double:
        line(ox * 0.5, oy * 0.5, "");
        line(-ox * 0.5, -oy * 0.5, "");
        break;
      case BondOrder::Triple:
        line(0, 0, "");
        line(ox, oy, "");
        line(-ox, -oy, "");
        break;
      case BondOrder::Aromatic:
        line(0, 0, "");
        line(ox, oy, " stroke-dasharray=\"3,2\"");
        break;
    }
  }
  for (int i = 0; i < g.atom_count(); ++i) {
    const AtomNode& a = g.atom(i);
    if (a.element == Element::C && g.degree(i) > 0 && a.formal_charge == 0) continue;
    std::string label(element_symbol(a.element));
    if (a.is_wildcard() && a.attachment_label) label = "*" + std::to_string(a.attachment_label);
    if (!a.is_wildcard() && a.hydrogens() > 0) {
      label += "H";
      if (a.hydrogens() > 1) label += std::to_string(a.hydrogens());
    }
    if (a.formal_charge > 0) label += a.formal_charge > 1 ? std::to_string(a.formal_charge) + "+" : "+";
    if (a.formal_charge < 0) label += a.formal_charge < -1 ? std::to_string(-a.formal_charge) + "-" : "-";
    const Point2 p = px(pos[i]);
    svg << "<circle cx=\"" << p.x << "\" cy=\"" << p.y << "\" r=\"7\" fill=\"white\"/>";
    svg << "<text x=\"" << p.x << "\" y=\"" << p.y + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << label << "</text>";
  }
  svg << "</svg>";
  return svg.str();
}

}  // namespace precut::chem
