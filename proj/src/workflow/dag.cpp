#include "dpcflow/workflow/dag.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dpcflow::wf {

char image_letter(ImageKind k) {
  switch (k) {
    case ImageKind::Router: return 'A';
    case ImageKind::BlockSvd: return 'B';
    case ImageKind::Merge: return 'C';
    case ImageKind::Export: return 'D';
  }
  return '?';
}

ImageKind image_from_letter(char c) {
  switch (c) {
    case 'A': return ImageKind::Router;
    case 'B': return ImageKind::BlockSvd;
    case 'C': return ImageKind::Merge;
    case 'D': return ImageKind::Export;
  }
  throw std::invalid_argument(std::string("unknown image kind '") + c + "'");
}

const TaskSpec& WorkflowDag::task(int id) const {
  return const_cast<WorkflowDag*>(this)->task(id);
}

TaskSpec& WorkflowDag::task(int id) {
  if (id < 1 || id > static_cast<int>(tasks.size()) || tasks[id - 1].task_id != id) {
    throw std::invalid_argument("WorkflowDag: no task with id " + std::to_string(id));
  }
  return tasks[id - 1];
}

std::vector<int> WorkflowDag::export_factor_parents() const {
  std::vector<int> out;
  for (int p : task(export_id).parents) {
    if (p != router_id) out.push_back(p);
  }
  return out;
}

int default_fold(int mpt) {
  if (mpt <= 1) return 0;
  const int depth = static_cast<int>(std::ceil(std::log2(static_cast<double>(mpt))));
  return depth > 2 ? 2 : mpt - 1;
}

namespace {

// Node of the merge-tree construction before task ids are assigned.
struct BuildNode {
  bool is_leaf = false;
  int leaf_ordinal = -1;  // for leaves
  int merge_ordinal = -1; // creation order for merges
  int src_a = -1, src_b = -1;  // BuildNode indices
  int level = 0;
  int col_start = 0;  // leftmost leaf covered, for column ordering
};

}  // namespace

WorkflowDag build_dpc_dag(int mpt, int fold_into_export) {
  if (mpt < 1) throw std::invalid_argument("build_dpc_dag: mpt must be >= 1");
  const int total_merges = mpt - 1;
  int fold = fold_into_export < 0 ? default_fold(mpt) : fold_into_export;
  if (fold < 0 || fold > std::max(0, mpt - 1)) {
    throw std::invalid_argument("build_dpc_dag: fold_into_export must be in [0, mpt-1]");
  }

  // Pairwise merge tree with odd-count carry, level by level.
  std::vector<BuildNode> nodes;
  std::vector<int> frontier;
  for (int i = 0; i < mpt; ++i) {
    BuildNode leaf;
    leaf.is_leaf = true;
    leaf.leaf_ordinal = i;
    leaf.level = 2;
    leaf.col_start = i;
    nodes.push_back(leaf);
    frontier.push_back(i);
  }
  int merge_count = 0;
  int tree_level = 2;
  while (frontier.size() > 1) {
    ++tree_level;
    std::vector<int> next;
    size_t i = 0;
    for (; i + 1 < frontier.size(); i += 2) {
      BuildNode merge;
      merge.merge_ordinal = merge_count++;
      merge.src_a = frontier[i];
      merge.src_b = frontier[i + 1];
      merge.level = tree_level;
      merge.col_start = nodes[frontier[i]].col_start;
      nodes.push_back(merge);
      next.push_back(static_cast<int>(nodes.size()) - 1);
    }
    if (i < frontier.size()) next.push_back(frontier[i]);
    frontier = std::move(next);
  }

  // The last `fold` merges by creation order run inside the export.
  const int standalone = total_merges - fold;
  auto absorbed = [&](const BuildNode& n) {
    return !n.is_leaf && n.merge_ordinal >= standalone;
  };

  // Task ids: router 1, leaves 2..mpt+1, standalone merges, export last.
  std::vector<int> node_task_id(nodes.size(), -1);
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].is_leaf) node_task_id[i] = 2 + nodes[i].leaf_ordinal;
    else if (!absorbed(nodes[i])) node_task_id[i] = mpt + 2 + nodes[i].merge_ordinal;
  }
  const int export_id = 2 + mpt + standalone;

  WorkflowDag dag;
  dag.mpt = mpt;
  dag.folded_merges = fold;
  dag.export_id = export_id;
  dag.tasks.resize(export_id);

  TaskSpec& router = dag.tasks[0];
  router.task_id = 1;
  router.kind = ImageKind::Router;
  router.level = 1;

  for (size_t i = 0; i < nodes.size(); ++i) {
    const BuildNode& n = nodes[i];
    if (node_task_id[i] < 0) continue;
    TaskSpec& t = dag.tasks[node_task_id[i] - 1];
    t.task_id = node_task_id[i];
    t.level = n.level;
    if (n.is_leaf) {
      t.kind = ImageKind::BlockSvd;
      t.leaf_ordinal = n.leaf_ordinal;
      t.parents.push_back(1);
    } else {
      t.kind = ImageKind::Merge;
      t.parents.push_back(node_task_id[n.src_a]);
      t.parents.push_back(node_task_id[n.src_b]);
    }
  }

  // Export frontier: non-absorbed nodes whose consumer is absorbed (or that
  // are the tree root), ordered by column coverage.
  std::vector<int> consumer(nodes.size(), -1);
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].is_leaf) {
      consumer[nodes[i].src_a] = static_cast<int>(i);
      consumer[nodes[i].src_b] = static_cast<int>(i);
    }
  }
  std::vector<int> frontier_nodes;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (absorbed(nodes[i])) continue;
    if (consumer[i] < 0 || absorbed(nodes[consumer[i]])) {
      frontier_nodes.push_back(static_cast<int>(i));
    }
  }
  std::sort(frontier_nodes.begin(), frontier_nodes.end(), [&](int a, int b) {
    return nodes[a].col_start < nodes[b].col_start;
  });

  TaskSpec& exp = dag.tasks[export_id - 1];
  exp.task_id = export_id;
  exp.kind = ImageKind::Export;
  exp.parents.push_back(1);  // w_p / r_f / Y_f sample path
  std::map<int, int> slot_of;  // BuildNode index -> export slot
  for (int ni : frontier_nodes) {
    slot_of[ni] = static_cast<int>(slot_of.size());
    exp.parents.push_back(node_task_id[ni]);
  }
  // Absorbed merges replayed in creation order, operands resolved to slots.
  std::vector<std::pair<int, int>> absorbed_order;  // (merge_ordinal, node idx)
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (absorbed(nodes[i])) absorbed_order.emplace_back(nodes[i].merge_ordinal, static_cast<int>(i));
  }
  std::sort(absorbed_order.begin(), absorbed_order.end());
  for (const auto& [ord, ni] : absorbed_order) {
    (void)ord;
    const int sa = slot_of.at(nodes[ni].src_a);
    const int sb = slot_of.at(nodes[ni].src_b);
    dag.export_merge_plan.push_back({sa, sb});
    slot_of[ni] = static_cast<int>(slot_of.size());
  }

  int max_level = 2;
  for (const TaskSpec& t : dag.tasks) {
    if (t.task_id != 0 && t.kind != ImageKind::Export) max_level = std::max(max_level, t.level);
  }
  exp.level = max_level + 1;

  // Children lists derived from parents.
  for (TaskSpec& t : dag.tasks) {
    for (int p : t.parents) dag.task(p).children.push_back(t.task_id);
  }
  return dag;
}

void assign_leaf_columns(WorkflowDag& dag, int j_cols) {
  if (j_cols < dag.mpt) {
    throw std::invalid_argument("assign_leaf_columns: fewer columns than leaves");
  }
  const int base = j_cols / dag.mpt;
  const int extra = j_cols % dag.mpt;
  int c = 0;
  for (TaskSpec& t : dag.tasks) {
    if (t.kind != ImageKind::BlockSvd) continue;
    const int width = base + (t.leaf_ordinal < extra ? 1 : 0);
    t.col_begin = c;
    t.col_end = c + width;
    c += width;
  }
  if (c != j_cols) throw std::logic_error("assign_leaf_columns: partition mismatch");
}

std::string dag_to_text(const WorkflowDag& dag) {
  std::ostringstream out;
  for (const TaskSpec& t : dag.tasks) {
    out << t.task_id << ' ' << image_letter(t.kind) << ' ' << t.level << " parents=";
    for (size_t i = 0; i < t.parents.size(); ++i) {
      if (i) out << ',';
      out << t.parents[i];
    }
    out << '\n';
  }
  return out.str();
}

WorkflowDag dag_from_text(const std::string& text) {
  WorkflowDag dag;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    TaskSpec t;
    std::string kind, parents;
    if (!(ls >> t.task_id >> kind >> t.level >> parents)) {
      throw std::invalid_argument("dag_from_text: bad line: " + line);
    }
    t.kind = image_from_letter(kind.at(0));
    if (parents.rfind("parents=", 0) != 0) {
      throw std::invalid_argument("dag_from_text: bad parents field: " + line);
    }
    std::istringstream ps(parents.substr(8));
    std::string tok;
    while (std::getline(ps, tok, ',')) {
      if (!tok.empty()) t.parents.push_back(std::stoi(tok));
    }
    dag.tasks.push_back(std::move(t));
  }
  std::sort(dag.tasks.begin(), dag.tasks.end(),
            [](const TaskSpec& a, const TaskSpec& b) { return a.task_id < b.task_id; });
  for (size_t i = 0; i < dag.tasks.size(); ++i) {
    if (dag.tasks[i].task_id != static_cast<int>(i) + 1) {
      throw std::invalid_argument("dag_from_text: task ids must be contiguous from 1");
    }
  }
  int ordinal = 0;
  for (TaskSpec& t : dag.tasks) {
    if (t.kind == ImageKind::BlockSvd) {
      t.leaf_ordinal = ordinal++;
      dag.mpt++;
    } else if (t.kind == ImageKind::Export) {
      dag.export_id = t.task_id;
    }
    for (int p : t.parents) dag.task(p).children.push_back(t.task_id);
  }
  dag.folded_merges = dag.mpt - 1 -
      static_cast<int>(std::count_if(dag.tasks.begin(), dag.tasks.end(),
                                     [](const TaskSpec& t) { return t.kind == ImageKind::Merge; }));
  // Reconstructed plan: pairwise reduction over the factor parents.
  const int f = static_cast<int>(dag.export_factor_parents().size());
  std::vector<int> slots(f);
  for (int i = 0; i < f; ++i) slots[i] = i;
  int next_slot = f;
  while (slots.size() > 1) {
    std::vector<int> next;
    size_t i = 0;
    for (; i + 1 < slots.size(); i += 2) {
      dag.export_merge_plan.push_back({slots[i], slots[i + 1]});
      next.push_back(next_slot++);
    }
    if (i < slots.size()) next.push_back(slots[i]);
    slots = std::move(next);
  }
  return dag;
}

}  // namespace dpcflow::wf
