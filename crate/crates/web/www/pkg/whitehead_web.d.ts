/* tslint:disable */
/* eslint-disable */

/**
 * `f∘g`, or `f` alone when `g` is blank; reports inverse and basis status.
 * A `rank` of 0 infers it from the input.
 */
export function automorphism_report(f: string, g: string, rank: number): string;

/**
 * Whether comma-separated words form a basis of the free group on them.
 */
export function basis_report(text: string, rank: number): string;

/**
 * Graphviz source for a diagram file.
 */
export function diagram_dot(json: string): string;

/**
 * Validates a diagram file and returns its trace and degree summary.
 */
export function diagram_report(json: string): string;

/**
 * Reduced form, inverse and product of comma-separated words, one per line.
 */
export function word_report(text: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly automorphism_report: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly basis_report: (a: number, b: number, c: number) => [number, number, number, number];
    readonly diagram_dot: (a: number, b: number) => [number, number, number, number];
    readonly diagram_report: (a: number, b: number) => [number, number, number, number];
    readonly word_report: (a: number, b: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
