/** View model for the collapsible tree panel. Nodes are immutable;
 * toggling returns a new tree with one flag flipped. */

import { ParseTreeJson, isLeaf } from "./types.js";

export interface TreeViewNode {
  /** Segment label for internal nodes, the token itself for leaves. */
  label: string;
  span: [number, number];
  /** Classifier confidence; null on leaves. */
  prob: number | null;
  collapsed: boolean;
  children: TreeViewNode[];
  /** Root-to-node child-index path, used to address toggles. */
  path: number[];
}

export function fromParseTree(
  node: ParseTreeJson,
  path: number[] = [],
): TreeViewNode {
  if (isLeaf(node)) {
    return {
      label: node.token,
      span: node.span,
      prob: null,
      collapsed: false,
      children: [],
      path,
    };
  }
  return {
    label: node.label,
    span: node.span,
    prob: node.prob,
    collapsed: false,
    children: node.children.map((c, i) => fromParseTree(c, [...path, i])),
    path,
  };
}

export function isLeafNode(node: TreeViewNode): boolean {
  return node.children.length === 0;
}

/** Flip the collapsed flag of the node at `path`. No-op on leaves,
 * so toggling any node twice always restores the original tree. */
export function toggleNode(root: TreeViewNode, path: number[]): TreeViewNode {
  if (path.length === 0) {
    if (isLeafNode(root)) return root;
    return { ...root, collapsed: !root.collapsed };
  }
  const [head, ...rest] = path;
  if (head < 0 || head >= root.children.length) return root;
  const children = root.children.slice();
  children[head] = toggleNode(children[head], rest);
  return { ...root, children };
}

/** Nodes currently shown: a collapsed node hides exactly its
 * descendants, nothing else. */
export function visibleNodes(root: TreeViewNode): TreeViewNode[] {
  const out: TreeViewNode[] = [root];
  if (!root.collapsed) {
    for (const child of root.children) {
      out.push(...visibleNodes(child));
    }
  }
  return out;
}

/** Leaf labels in order, ignoring collapse state. Equals the
 * server's tokenization of the sentence. */
export function leafTokens(root: TreeViewNode): string[] {
  if (isLeafNode(root)) return [root.label];
  return root.children.flatMap(leafTokens);
}
