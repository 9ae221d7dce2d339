# CSV and SVG emitters for sweep results
