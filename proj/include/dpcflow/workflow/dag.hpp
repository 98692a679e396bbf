#pragma once

#include <array>
#include <string>
#include <vector>

namespace dpcflow::wf {

/// Task images: A = data router / pre-controller, B = block SVD leaf,
/// C = merge-and-truncate, D = export (final merge + control law).
enum class ImageKind { Router, BlockSvd, Merge, Export };

char image_letter(ImageKind k);
ImageKind image_from_letter(char c);

struct TaskSpec {
  int task_id = 0;
  ImageKind kind = ImageKind::Router;
  int level = 0;
  std::vector<int> parents;
  std::vector<int> children;
  // Column slice of V_p owned by a leaf; assigned when an engine binds the
  // DAG to concrete Hankel dimensions.
  int col_begin = 0;
  int col_end = 0;
  int leaf_ordinal = -1;
};

struct WorkflowDag {
  std::vector<TaskSpec> tasks;  // 1-based contiguous ids, router first
  int mpt = 0;
  int folded_merges = 0;
  int router_id = 1;
  int export_id = 0;
  // Merge operations the export performs on its incoming factor streams.
  // Slot i < F is the i-th factor parent (export parents after the router);
  // each entry merges two slots and appends its result as a new slot.
  std::vector<std::array<int, 2>> export_merge_plan;

  const TaskSpec& task(int id) const;
  TaskSpec& task(int id);
  /// Factor parents of the export in slot order (router excluded).
  std::vector<int> export_factor_parents() const;
};

/// Merge-tree depth over mpt leaves; folding defaults to 2 absorbed merges
/// when the tree is deeper than 2 levels, otherwise all of them.
int default_fold(int mpt);

/// Router + mpt block-SVD leaves + pairwise merge tree (odd-count carry) +
/// export, with the last fold_into_export merges absorbed into the export
/// task. fold_into_export = -1 selects default_fold(mpt).
WorkflowDag build_dpc_dag(int mpt, int fold_into_export = -1);

/// Partition j columns across the leaves (widths differ by at most one).
void assign_leaf_columns(WorkflowDag& dag, int j_cols);

/// Plain-text topology, one line per task: `id kind level parents=...`.
std::string dag_to_text(const WorkflowDag& dag);

/// Rebuild a DAG from its text form. Children lists are derived from the
/// parent lists; the export merge plan is reconstructed as the pairwise
/// reduction over the export's factor parents.
WorkflowDag dag_from_text(const std::string& text);

}  // namespace dpcflow::wf
