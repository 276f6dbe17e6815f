/** Wire format and endpoint payloads served by the document service. */
export const cellKey = (c) => `${c.dataset}${c.row}${c.field}`;
